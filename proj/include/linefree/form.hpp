// form.hpp — homogeneous forms over F_q: parsing, evaluation, restriction
// to hyperplanes and lines, formal derivatives, linear changes of variables,
// coefficient Frobenius, and perfect-square detection.
//
// Monomial order (frozen, see docs/enumeration.md): within a fixed degree,
// exponent vectors are ordered lexicographically DESCENDING with x0 most
// significant, so monomial index 0 of degree d is x0^d. Coefficient vectors
// of fixed (nvars, d) follow this order everywhere (reports, scans, orbit
// keys).
//
// The zero form is unrepresentable: operations that can produce it
// (derivative, hyperplane restriction) return std::nullopt instead. Line
// restrictions return a BinaryForm, which does represent zero — that is the
// line-containment signal.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "linefree/gf.hpp"
#include "linefree/projgeom.hpp"

namespace linefree {

using ExpVec = std::vector<uint8_t>;

namespace detail {

struct DescLex {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

// General sparse multivariate polynomial over F_q, used as the internal
// workhorse for parsing and substitution. Not necessarily homogeneous.
class SparsePoly {
public:
    SparsePoly(const FieldSpec& F, int nvars) : F_(&F), nvars_(nvars) {}

    static SparsePoly constant(const FieldSpec& F, int nvars, uint32_t cidx) {
        SparsePoly p(F, nvars);
        if (cidx != 0) p.terms_[ExpVec(nvars, 0)] = cidx;
        return p;
    }

    static SparsePoly variable(const FieldSpec& F, int nvars, int i) {
        SparsePoly p(F, nvars);
        ExpVec e(nvars, 0);
        e.at(i) = 1;
        p.terms_[e] = 1;
        return p;
    }

    const FieldSpec& field() const { return *F_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<ExpVec, uint32_t, DescLex>& terms() const { return terms_; }

    void add_term(const ExpVec& e, uint32_t cidx) {
        if (cidx == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_[e] = cidx;
        } else {
            it->second = F_->add_idx(it->second, cidx);
            if (it->second == 0) terms_.erase(it);
        }
    }

    SparsePoly operator+(const SparsePoly& o) const {
        SparsePoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    SparsePoly operator-(const SparsePoly& o) const {
        SparsePoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, F_->neg_idx(c));
        return r;
    }

    SparsePoly operator*(const SparsePoly& o) const {
        SparsePoly r(*F_, nvars_);
        for (const auto& [ea, ca] : terms_) {
            for (const auto& [eb, cb] : o.terms_) {
                ExpVec e(nvars_);
                for (int i = 0; i < nvars_; ++i) {
                    unsigned s = ea[i] + eb[i];
                    if (s > 255) throw std::invalid_argument("exponent overflow");
                    e[i] = static_cast<uint8_t>(s);
                }
                r.add_term(e, F_->mul_idx(ca, cb));
            }
        }
        return r;
    }

    SparsePoly pow(uint64_t k) const {
        SparsePoly r = constant(*F_, nvars_, 1);
        SparsePoly base = *this;
        while (k) {
            if (k & 1) r = r * base;
            if (k >>= 1) base = base * base;
        }
        return r;
    }

    SparsePoly scaled(uint32_t cidx) const {
        SparsePoly r(*F_, nvars_);
        for (const auto& [e, c] : terms_) r.terms_[e] = F_->mul_idx(c, cidx);
        if (cidx == 0) r.terms_.clear();
        return r;
    }

    // substitute x_i -> linear forms lin[i] (coeff idx vectors over out_vars)
    SparsePoly substitute_linear(int out_vars, const std::vector<std::vector<uint32_t>>& lin) const {
        if (static_cast<int>(lin.size()) != nvars_)
            throw std::invalid_argument("substitution needs one linear form per variable");
        // power cache per input variable
        std::vector<std::vector<SparsePoly>> powers(nvars_);
        auto linear_power = [&](int i, unsigned k) -> const SparsePoly& {
            auto& cache = powers[i];
            if (cache.empty()) {
                cache.push_back(constant(*F_, out_vars, 1));
                SparsePoly l(*F_, out_vars);
                for (int j = 0; j < out_vars; ++j) {
                    ExpVec e(out_vars, 0);
                    e[j] = 1;
                    l.add_term(e, lin[i].at(j));
                }
                cache.push_back(std::move(l));
            }
            while (cache.size() <= k) cache.push_back(cache.back() * cache[1]);
            return cache[k];
        };
        SparsePoly r(*F_, out_vars);
        for (const auto& [e, c] : terms_) {
            SparsePoly t = constant(*F_, out_vars, c);
            for (int i = 0; i < nvars_; ++i)
                if (e[i] > 0) t = t * linear_power(i, e[i]);
            r = r + t;
        }
        return r;
    }

private:
    const FieldSpec* F_;
    int nvars_;
    std::map<ExpVec, uint32_t, DescLex> terms_;
};

inline std::string pack_exp(const ExpVec& e) {
    return std::string(reinterpret_cast<const char*>(e.data()), e.size());
}

}  // namespace detail

// The frozen list of degree-d monomials in `nvars` variables, descending
// lex. For (nvars=3, d=4) this has 15 entries; (nvars=4, d=4) has 35.
class MonomialBasis {
public:
    static const MonomialBasis& get(int nvars, int degree) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(nvars, degree);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<MonomialBasis>(new MonomialBasis(nvars, degree))).first;
        return *it->second;
    }

    size_t size() const { return monomials_.size(); }
    const std::vector<ExpVec>& monomials() const { return monomials_; }
    const ExpVec& monomial(size_t i) const { return monomials_.at(i); }

    int index_of(const ExpVec& e) const {
        auto it = index_.find(detail::pack_exp(e));
        if (it == index_.end()) throw std::invalid_argument("exponent vector not in basis");
        return it->second;
    }

private:
    MonomialBasis(int nvars, int degree) {
        if (nvars < 1 || degree < 0) throw std::invalid_argument("bad monomial basis parameters");
        ExpVec cur(nvars, 0);
        emit(cur, 0, degree, nvars);
        for (size_t i = 0; i < monomials_.size(); ++i)
            index_[detail::pack_exp(monomials_[i])] = static_cast<int>(i);
    }

    void emit(ExpVec& cur, int var, int remaining, int nvars) {
        if (var == nvars - 1) {
            cur[var] = static_cast<uint8_t>(remaining);
            monomials_.push_back(cur);
            cur[var] = 0;
            return;
        }
        for (int a = remaining; a >= 0; --a) {
            cur[var] = static_cast<uint8_t>(a);
            emit(cur, var + 1, remaining - a, nvars);
        }
        cur[var] = 0;
    }

    std::vector<ExpVec> monomials_;
    std::unordered_map<std::string, int> index_;
};

// Nonzero homogeneous form of degree d >= 1 in `nvars` variables. Terms are
// kept in descending lex order with nonzero coefficients only.
class HomogeneousForm {
public:
    HomogeneousForm(const FieldSpec& F, int nvars, detail::SparsePoly poly) : F_(&F), nvars_(nvars) {
        if (poly.is_zero()) throw std::invalid_argument("the zero form is not representable");
        int d = -1;
        for (const auto& [e, c] : poly.terms()) {
            int s = 0;
            for (uint8_t x : e) s += x;
            if (d < 0) d = s;
            else if (d != s) throw std::invalid_argument("form is not homogeneous");
            terms_.emplace_back(e, c);
        }
        if (d < 1) throw std::invalid_argument("form degree must be >= 1");
        degree_ = d;
    }

    static HomogeneousForm from_coeff_vector(const FieldSpec& F, int nvars, int degree,
                                             std::span<const uint32_t> coeffs) {
        const MonomialBasis& B = MonomialBasis::get(nvars, degree);
        if (coeffs.size() != B.size()) throw std::invalid_argument("coefficient vector length mismatch");
        detail::SparsePoly p(F, nvars);
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i] != 0) p.add_term(B.monomial(i), coeffs[i]);
        return HomogeneousForm(F, nvars, std::move(p));
    }

    const FieldSpec& field() const { return *F_; }
    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    const std::vector<std::pair<ExpVec, uint32_t>>& terms() const { return terms_; }

    std::vector<uint32_t> coeff_vector() const {
        const MonomialBasis& B = MonomialBasis::get(nvars_, degree_);
        std::vector<uint32_t> v(B.size(), 0);
        for (const auto& [e, c] : terms_) v[B.index_of(e)] = c;
        return v;
    }

    FieldElement coefficient(const ExpVec& e) const {
        for (const auto& [te, c] : terms_)
            if (te == e) return FieldElement(*F_, c);
        return F_->zero();
    }

    uint32_t evaluate_idx(std::span<const uint32_t> coords) const {
        if (static_cast<int>(coords.size()) != nvars_)
            throw std::invalid_argument("coordinate count mismatch");
        uint32_t acc = 0;
        for (const auto& [e, c] : terms_) {
            uint32_t t = c;
            for (int i = 0; i < nvars_ && t != 0; ++i)
                if (e[i]) t = F_->mul_idx(t, F_->pow_idx(coords[i], e[i]));
            acc = F_->add_idx(acc, t);
        }
        return acc;
    }

    FieldElement evaluate(const ProjPoint& P) const {
        if (&P.field() != F_) throw std::invalid_argument("point field mismatch");
        std::vector<uint32_t> coords(P.coords.size());
        for (size_t i = 0; i < coords.size(); ++i) coords[i] = P.coords[i].idx();
        return FieldElement(*F_, evaluate_idx(coords));
    }

    bool vanishes_at(const ProjPoint& P) const { return evaluate(P).is_zero(); }

    detail::SparsePoly to_poly() const {
        detail::SparsePoly p(*F_, nvars_);
        for (const auto& [e, c] : terms_) p.add_term(e, c);
        return p;
    }

    bool operator==(const HomogeneousForm& o) const {
        return F_ == o.F_ && nvars_ == o.nvars_ && degree_ == o.degree_ && terms_ == o.terms_;
    }
    bool operator!=(const HomogeneousForm& o) const { return !(*this == o); }

private:
    const FieldSpec* F_;
    int nvars_;
    int degree_;
    std::vector<std::pair<ExpVec, uint32_t>> terms_;
};

// Binary form f(s, t) of degree d; coeffs_[k] is the coefficient of
// s^{d-k} t^k. Unlike HomogeneousForm this may be identically zero, which is
// how line containment is signalled.
class BinaryForm {
public:
    BinaryForm(const FieldSpec& F, int degree, std::vector<uint32_t> coeffs)
        : F_(&F), degree_(degree), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != static_cast<size_t>(degree_) + 1)
            throw std::invalid_argument("binary form needs exactly degree+1 coefficients");
    }

    const FieldSpec& field() const { return *F_; }
    int degree() const { return degree_; }
    const std::vector<uint32_t>& coeffs() const { return coeffs_; }
    FieldElement coeff(int k) const { return FieldElement(*F_, coeffs_.at(k)); }

    bool is_zero() const {
        for (uint32_t c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    uint32_t evaluate_idx(uint32_t s, uint32_t t) const {
        uint32_t acc = 0;
        for (int k = 0; k <= degree_; ++k) {
            uint32_t v = coeffs_[k];
            if (v == 0) continue;
            v = F_->mul_idx(v, F_->pow_idx(s, degree_ - k));
            v = F_->mul_idx(v, F_->pow_idx(t, k));
            acc = F_->add_idx(acc, v);
        }
        return acc;
    }

    // number of distinct projective F_q-roots ((1:t) for t in F_q, plus (0:1))
    int count_projective_roots() const {
        if (is_zero()) throw std::logic_error("the zero binary form has every point as a root");
        int roots = 0;
        for (uint32_t t = 0; t < F_->q(); ++t)
            if (evaluate_idx(1, t) == 0) ++roots;
        if (coeffs_[degree_] == 0) ++roots;  // (0:1)
        return roots;
    }

private:
    const FieldSpec* F_;
    int degree_;
    std::vector<uint32_t> coeffs_;
};

// ---- parsing and formatting ----

namespace detail {

// expression parser over field constants, the generator symbol w, and
// variables x0..x{nvars-1}; mirrors ElementParser with variables added.
class FormParser {
public:
    FormParser(std::string_view text, const FieldSpec& F, int nvars)
        : s_(text), F_(F), nvars_(nvars) {}

    SparsePoly parse() {
        SparsePoly v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return v;
    }

private:
    SparsePoly expr() {
        skip_ws();
        bool neg = consume('-');
        SparsePoly v = term();
        if (neg) v = SparsePoly(F_, nvars_) - v;
        for (;;) {
            skip_ws();
            if (consume('+')) v = v + term();
            else if (consume('-')) v = v - term();
            else return v;
        }
    }

    SparsePoly term() {
        SparsePoly v = factor();
        for (;;) {
            skip_ws();
            if (consume('*')) v = v * factor();
            else return v;
        }
    }

    SparsePoly factor() {
        SparsePoly v = atom();
        skip_ws();
        if (consume('^')) v = v.pow(uint_lit());
        return v;
    }

    SparsePoly atom() {
        skip_ws();
        if (consume('(')) {
            SparsePoly v = expr();
            skip_ws();
            if (!consume(')')) fail("expected ')'");
            return v;
        }
        if (pos_ < s_.size() && s_[pos_] == 'x') {
            ++pos_;
            uint64_t i = uint_lit_noskip();
            if (i >= static_cast<uint64_t>(nvars_))
                fail("variable x" + std::to_string(i) + " out of range (have x0..x" +
                     std::to_string(nvars_ - 1) + ")");
            return SparsePoly::variable(F_, nvars_, static_cast<int>(i));
        }
        if (pos_ < s_.size() && s_[pos_] == 'w') {
            ++pos_;
            if (F_.e() < 2) fail("symbol 'w' is undefined in a prime field");
            return SparsePoly::constant(F_, nvars_, F_.p());
        }
        if (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9')
            return SparsePoly::constant(F_, nvars_, F_.from_int(uint_lit()).idx());
        fail("expected coefficient, variable, or '('");
        return SparsePoly(F_, nvars_);
    }

    uint64_t uint_lit() {
        skip_ws();
        return uint_lit_noskip();
    }

    uint64_t uint_lit_noskip() {
        if (pos_ >= s_.size() || s_[pos_] < '0' || s_[pos_] > '9') fail("expected integer");
        uint64_t v = 0;
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
            v = v * 10 + (s_[pos_] - '0');
            if (v > (1ull << 40)) fail("integer literal too large");
            ++pos_;
        }
        return v;
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw std::invalid_argument("form parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view s_;
    const FieldSpec& F_;
    int nvars_;
    size_t pos_ = 0;
};

}  // namespace detail

inline HomogeneousForm parse_form(std::string_view text, const FieldSpec& F, int nvars) {
    detail::SparsePoly p = detail::FormParser(text, F, nvars).parse();
    if (p.is_zero()) throw std::invalid_argument("input simplifies to the zero form");
    return HomogeneousForm(F, nvars, std::move(p));
}

// Canonical text: terms in descending lex, explicit '*' and '^', coefficient
// omitted when 1, parenthesized when it contains '+'. parse(format(f)) == f.
inline std::string format_form(const HomogeneousForm& f) {
    const FieldSpec& F = f.field();
    std::string out;
    for (const auto& [e, c] : f.terms()) {
        if (!out.empty()) out += " + ";
        std::string mono;
        for (int i = 0; i < f.nvars(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "x" + std::to_string(i);
            if (e[i] >= 2) mono += "^" + std::to_string(static_cast<int>(e[i]));
        }
        if (c != 1) {
            std::string ce = format_element(FieldElement(F, c));
            if (ce.find('+') != std::string::npos) ce = "(" + ce + ")";
            out += ce + "*";
        }
        out += mono;
    }
    return out;
}

// Form files: '#' starts a comment, header directives `field p e` and
// `vars v` (required, v = n+1) plus optional `degree d`, then one form per
// line.
struct FormFile {
    const FieldSpec* field = nullptr;
    int nvars = 0;
    std::optional<int> degree;
    std::vector<HomogeneousForm> forms;
};

inline FormFile parse_form_file(std::istream& in, const std::string& origin = "form file") {
    uint32_t p = 0, e = 0;
    int nvars = 0;
    std::optional<int> degree;
    std::vector<std::string> texts;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string head;
        if (!(ss >> head)) continue;
        if (head == "field") {
            if (!(ss >> p >> e)) throw std::invalid_argument(origin + ": bad 'field p e' line");
        } else if (head == "vars") {
            if (!(ss >> nvars)) throw std::invalid_argument(origin + ": bad 'vars' line");
        } else if (head == "degree") {
            int d;
            if (!(ss >> d)) throw std::invalid_argument(origin + ": bad 'degree' line");
            degree = d;
        } else {
            size_t b = line.find_first_not_of(" \t");
            size_t last = line.find_last_not_of(" \t");
            texts.push_back(line.substr(b, last - b + 1));
        }
    }
    if (p == 0 || nvars == 0)
        throw std::invalid_argument(origin + ": missing 'field p e' or 'vars' header");
    if (texts.empty()) throw std::invalid_argument(origin + ": no forms found");
    FormFile ff;
    ff.field = &FieldSpec::get(p, e);
    ff.nvars = nvars;
    ff.degree = degree;
    for (const auto& t : texts) {
        ff.forms.push_back(parse_form(t, *ff.field, nvars));
        if (degree && ff.forms.back().degree() != *degree)
            throw std::invalid_argument(origin + ": form degree " +
                                        std::to_string(ff.forms.back().degree()) +
                                        " disagrees with the 'degree' header");
    }
    return ff;
}

// ---- geometric operations ----

// f(s*P + t*Q) for the canonical basis points of l, as a degree-d binary
// form. All-zero coefficients <=> the line lies on the hypersurface.
inline BinaryForm restrict_to_line(const HomogeneousForm& f, const ProjLine& l) {
    const FieldSpec& F = f.field();
    int dim = f.nvars();
    if (l.n() + 1 != dim) throw std::invalid_argument("line dimension mismatch");
    std::vector<std::vector<uint32_t>> lin(dim);
    for (int i = 0; i < dim; ++i) lin[i] = {l.at(0, i).idx(), l.at(1, i).idx()};
    detail::SparsePoly r = f.to_poly().substitute_linear(2, lin);
    std::vector<uint32_t> coeffs(f.degree() + 1, 0);
    for (const auto& [e, c] : r.terms()) coeffs[e[1]] = c;
    return BinaryForm(F, f.degree(), std::move(coeffs));
}

// Restriction of f to the hyperplane H, written in the n coordinates of the
// fixed parametrization of H (the standard unit vectors complementary to the
// pivot of the normalized dual vector). Returns nullopt when H is a
// component of f's zero set (restriction identically zero).
inline std::optional<HomogeneousForm> restrict_to_hyperplane(const HomogeneousForm& f, const Hyperplane& H) {
    const FieldSpec& F = f.field();
    int dim = f.nvars();
    if (H.n() + 1 != dim) throw std::invalid_argument("hyperplane dimension mismatch");
    int pivot = 0;
    while (pivot < dim && H.dual[pivot].is_zero()) ++pivot;
    // x_j = y_{slot(j)} for j != pivot; x_pivot = -sum_j dual_j y_{slot(j)}
    std::vector<std::vector<uint32_t>> lin(dim, std::vector<uint32_t>(dim - 1, 0));
    int slot = 0;
    for (int j = 0; j < dim; ++j) {
        if (j == pivot) continue;
        lin[j][slot] = 1;
        lin[pivot][slot] = F.neg_idx(H.dual[j].idx());
        ++slot;
    }
    detail::SparsePoly r = f.to_poly().substitute_linear(dim - 1, lin);
    if (r.is_zero()) return std::nullopt;
    return HomogeneousForm(F, dim - 1, std::move(r));
}

// Formal partial derivative with characteristic-p coefficient rules; nullopt
// when identically zero.
inline std::optional<HomogeneousForm> partial_derivative(const HomogeneousForm& f, int var) {
    const FieldSpec& F = f.field();
    if (var < 0 || var >= f.nvars()) throw std::invalid_argument("variable index out of range");
    detail::SparsePoly r(F, f.nvars());
    for (const auto& [e, c] : f.terms()) {
        if (e[var] == 0) continue;
        uint32_t m = F.from_int(e[var]).idx();  // exponent mod p
        if (m == 0) continue;
        ExpVec ne = e;
        --ne[var];
        r.add_term(ne, F.mul_idx(c, m));
    }
    if (r.is_zero()) return std::nullopt;
    return HomogeneousForm(F, f.nvars(), std::move(r));
}

// Coefficient-wise x -> x^base_q; exponents untouched.
inline HomogeneousForm frobenius_image(const HomogeneousForm& f, uint64_t base_q) {
    const FieldSpec& F = f.field();
    F.check_frobenius_base(base_q);
    detail::SparsePoly r(F, f.nvars());
    for (const auto& [e, c] : f.terms()) r.add_term(e, F.frobenius_idx(c, base_q));
    return HomogeneousForm(F, f.nvars(), std::move(r));
}

// f ∘ M^{-1}: apply_map(f, M) vanishes at M(P) iff f vanishes at P, so the
// action on forms is a left action compatible with the action on points.
inline HomogeneousForm apply_map(const HomogeneousForm& f, const ProjectiveMap& M) {
    const FieldSpec& F = f.field();
    int dim = f.nvars();
    if (M.n + 1 != dim) throw std::invalid_argument("map dimension mismatch");
    ProjectiveMap inv = M.inverse();
    std::vector<std::vector<uint32_t>> lin(dim, std::vector<uint32_t>(dim, 0));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) lin[i][j] = inv.at(i, j).idx();
    detail::SparsePoly r = f.to_poly().substitute_linear(dim, lin);
    return HomogeneousForm(F, dim, std::move(r));
}

namespace detail {

// smallest-index square root of c, or nullopt; deterministic
inline std::optional<uint32_t> sqrt_idx(const FieldSpec& F, uint32_t c) {
    if (c == 0) return 0;
    if (F.p() == 2) return F.pow_idx(c, F.q() / 2);  // Frobenius is bijective
    for (uint32_t t = 1; t < F.q(); ++t)
        if (F.mul_idx(t, t) == c) return t;
    return std::nullopt;
}

}  // namespace detail

// Returns g with g^2 = f when f is a perfect square, else nullopt.
// Characteristic 2: squares are exactly the forms with all-even exponents.
// Odd characteristic: leading-term square-root long division, then a
// verification multiply.
inline std::optional<HomogeneousForm> is_perfect_square(const HomogeneousForm& f) {
    const FieldSpec& F = f.field();
    if (f.degree() % 2 != 0) throw std::invalid_argument("is_perfect_square requires even degree");

    auto verify = [&](const HomogeneousForm& g) -> std::optional<HomogeneousForm> {
        detail::SparsePoly sq = g.to_poly() * g.to_poly();
        if (HomogeneousForm(F, f.nvars(), std::move(sq)) == f) return g;
        return std::nullopt;
    };

    if (F.p() == 2) {
        detail::SparsePoly root(F, f.nvars());
        for (const auto& [e, c] : f.terms()) {
            ExpVec h(e.size());
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] % 2 != 0) return std::nullopt;
                h[i] = e[i] / 2;
            }
            root.add_term(h, *detail::sqrt_idx(F, c));
        }
        return verify(HomogeneousForm(F, f.nvars(), std::move(root)));
    }

    // odd characteristic: g starts as sqrt(leading term of f); each round
    // peels the leading term of f - g^2
    const auto& lead = f.terms().front();
    ExpVec groot(lead.first.size());
    for (size_t i = 0; i < groot.size(); ++i) {
        if (lead.first[i] % 2 != 0) return std::nullopt;
        groot[i] = lead.first[i] / 2;
    }
    auto c0 = detail::sqrt_idx(F, lead.second);
    if (!c0) return std::nullopt;
    detail::SparsePoly g(F, f.nvars());
    g.add_term(groot, *c0);
    uint32_t two_c0_inv = F.inv_idx(F.mul_idx(F.from_int(2).idx(), *c0));

    size_t max_iter = MonomialBasis::get(f.nvars(), f.degree() / 2).size() + 1;
    detail::SparsePoly fp = f.to_poly();
    for (size_t iter = 0; iter < max_iter; ++iter) {
        detail::SparsePoly r = fp - g * g;
        if (r.is_zero()) return verify(HomogeneousForm(F, f.nvars(), std::move(g)));
        const auto& rt = *r.terms().begin();
        ExpVec qe(rt.first.size());
        for (size_t i = 0; i < qe.size(); ++i) {
            if (rt.first[i] < groot[i]) return std::nullopt;
            qe[i] = rt.first[i] - groot[i];
        }
        int qdeg = 0;
        for (uint8_t x : qe) qdeg += x;
        if (qdeg != f.degree() / 2) return std::nullopt;  // quotient escapes the root degree
        g.add_term(qe, F.mul_idx(rt.second, two_c0_inv));
    }
    return std::nullopt;
}

}  // namespace linefree
