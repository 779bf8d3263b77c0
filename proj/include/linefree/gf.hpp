// gf.hpp — exact arithmetic in small finite fields GF(p^e), q = p^e <= 2^16.
//
// Elements are identified by their canonical index
//     idx(a) = sum_i rep[i] * p^i,   rep = coordinates of a in the power
//                                    basis 1, w, w^2, ... of F_p[x]/(m(x)),
// so idx(0) = 0 and idx(1) = 1.  The modulus m(x) for a given (p, e) is the
// lexicographically first monic irreducible polynomial of degree e over F_p
// (lower-degree coefficients enumerated as base-p digits of 0, 1, 2, ...).
// Fixing the modulus this way keeps element encodings identical across runs.
//
// Multiplication uses log/antilog tables for q <= 4096 and schoolbook
// polynomial multiplication with modulus reduction above that.

#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace linefree {

class FieldElement;

class FieldSpec {
public:
    // Canonical shared instance per (p, e); element identity checks rely on
    // pointer equality of specs.
    static const FieldSpec& get(uint32_t p, uint32_t e) {
        static std::mutex mu;
        static std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<FieldSpec>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, e);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<FieldSpec>(new FieldSpec(p, e))).first;
        return *it->second;
    }

    // Resolves q = p^e. Errors unless q is a prime power.
    static const FieldSpec& get_by_order(uint64_t q) {
        if (q < 2) throw std::invalid_argument("field order must be >= 2");
        uint64_t p = smallest_prime_factor(q);
        uint32_t e = 0;
        uint64_t t = q;
        while (t % p == 0) { t /= p; ++e; }
        if (t != 1) throw std::invalid_argument("field order " + std::to_string(q) + " is not a prime power");
        return get(static_cast<uint32_t>(p), e);
    }

    FieldSpec(const FieldSpec&) = delete;
    FieldSpec& operator=(const FieldSpec&) = delete;

    uint32_t p() const { return p_; }
    uint32_t e() const { return e_; }
    uint32_t q() const { return q_; }
    // Monic modulus of degree e, index i = coefficient of x^i (modulus[e] = 1).
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    // ---- index-level arithmetic (hot-path friendly) ----

    uint32_t add_idx(uint32_t a, uint32_t b) const {
        if (p_ == 2) return a ^ b;
        if (!add_table_.empty()) return add_table_[a * q_ + b];
        return add_digitwise(a, b);
    }

    uint32_t neg_idx(uint32_t a) const { return neg_table_[a]; }

    uint32_t sub_idx(uint32_t a, uint32_t b) const { return add_idx(a, neg_idx(b)); }

    uint32_t mul_idx(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        if (!log_.empty()) return exp_[log_[a] + log_[b]];
        return mul_poly(a, b);
    }

    uint32_t inv_idx(uint32_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        if (!log_.empty()) return exp_[(q_ - 1) - log_[a]];
        return pow_idx(a, q_ - 2);
    }

    uint32_t div_idx(uint32_t a, uint32_t b) const { return mul_idx(a, inv_idx(b)); }

    uint32_t pow_idx(uint32_t a, uint64_t k) const {
        if (a == 0) return k == 0 ? 1u : 0u;  // 0^0 := 1
        if (!log_.empty()) {
            uint64_t l = (static_cast<uint64_t>(log_[a]) * (k % (q_ - 1))) % (q_ - 1);
            return exp_[l];
        }
        uint32_t r = 1, base = a;
        while (k) {
            if (k & 1) r = mul_idx(r, base);
            base = mul_idx(base, base);
            k >>= 1;
        }
        return r;
    }

    // a^base_q where base_q = p^m, 1 <= m <= e.
    uint32_t frobenius_idx(uint32_t a, uint64_t base_q) const {
        check_frobenius_base(base_q);
        return pow_idx(a, base_q);
    }

    void check_frobenius_base(uint64_t base_q) const {
        uint64_t t = base_q;
        if (t < 2) throw std::invalid_argument("frobenius base must be a positive power of p");
        while (t % p_ == 0) t /= p_;
        if (t != 1 || base_q > q_)
            throw std::invalid_argument("frobenius base " + std::to_string(base_q) +
                                        " is not a power of p dividing the field structure");
    }

    // digits of idx in base p, least significant first, length e.
    std::vector<uint32_t> digits(uint32_t a) const {
        std::vector<uint32_t> d(e_);
        for (uint32_t i = 0; i < e_; ++i) { d[i] = a % p_; a /= p_; }
        return d;
    }

    uint32_t from_digits(const std::vector<uint32_t>& d) const {
        if (d.size() != e_) throw std::invalid_argument("digit vector length mismatch");
        uint32_t a = 0;
        for (uint32_t i = e_; i-- > 0;) {
            if (d[i] >= p_) throw std::invalid_argument("digit out of range");
            a = a * p_ + d[i];
        }
        return a;
    }

    // Multiplicative generator used by the log/antilog tables (q <= 4096).
    uint32_t generator_idx() const {
        if (exp_.empty()) throw std::logic_error("no generator tables for this field size");
        return exp_[1];
    }

    FieldElement element(uint32_t idx) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement gen() const;  // the class of x (exists iff e >= 2)
    FieldElement from_int(uint64_t k) const;  // k mod p, embedded via the prime subfield

    std::vector<FieldElement> enumerate_elements() const;

private:
    FieldSpec(uint32_t p, uint32_t e) : p_(p), e_(e) {
        if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
        if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
        uint64_t q = 1;
        for (uint32_t i = 0; i < e; ++i) {
            q *= p;
            if (q > 65536) throw std::invalid_argument("field size exceeds 2^16");
        }
        q_ = static_cast<uint32_t>(q);
        modulus_ = first_irreducible(p, e);
        neg_table_.resize(q_);
        for (uint32_t a = 0; a < q_; ++a) neg_table_[a] = neg_digitwise(a);
        if (p_ != 2 && q_ <= 256) {
            add_table_.resize(static_cast<size_t>(q_) * q_);
            for (uint32_t a = 0; a < q_; ++a)
                for (uint32_t b = 0; b < q_; ++b)
                    add_table_[a * q_ + b] = static_cast<uint16_t>(add_digitwise(a, b));
        }
        if (q_ <= 4096) build_log_tables();
    }

    static bool is_prime(uint32_t n) {
        if (n < 2) return false;
        for (uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static uint64_t smallest_prime_factor(uint64_t n) {
        for (uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return d;
        return n;
    }

    // ---- construction-time polynomial arithmetic over F_p ----

    using Poly = std::vector<uint32_t>;  // coefficient i of x^i, may have trailing zeros

    static int degree_of(const Poly& f) {
        for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
            if (f[i] != 0) return i;
        return -1;
    }

    static Poly poly_mod(Poly f, const Poly& m, uint32_t p) {
        int dm = degree_of(m);
        for (int i = degree_of(f); i >= dm; i = degree_of(f)) {
            uint32_t c = f[i];  // m is monic
            for (int j = 0; j <= dm; ++j) {
                uint32_t sub = (c * m[j]) % p;
                f[i - dm + j] = (f[i - dm + j] + p - sub) % p;
            }
        }
        return f;
    }

    static bool divides(const Poly& g, const Poly& f, uint32_t p) {
        return degree_of(poly_mod(f, g, p)) < 0;
    }

    static bool is_irreducible(const Poly& f, uint32_t p) {
        int d = degree_of(f);
        if (d < 1) return false;
        // trial division by all monic polynomials of degree 1..d/2
        for (int k = 1; 2 * k <= d; ++k) {
            uint64_t count = 1;
            for (int i = 0; i < k; ++i) count *= p;
            for (uint64_t code = 0; code < count; ++code) {
                Poly g(k + 1, 0);
                uint64_t c = code;
                for (int i = 0; i < k; ++i) { g[i] = c % p; c /= p; }
                g[k] = 1;
                if (divides(g, f, p)) return false;
            }
        }
        return true;
    }

    static Poly first_irreducible(uint32_t p, uint32_t e) {
        uint64_t count = 1;
        for (uint32_t i = 0; i < e; ++i) count *= p;
        for (uint64_t code = 0; code < count; ++code) {
            Poly f(e + 1, 0);
            uint64_t c = code;
            for (uint32_t i = 0; i < e; ++i) { f[i] = c % p; c /= p; }
            f[e] = 1;
            if (is_irreducible(f, p)) return f;
        }
        throw std::logic_error("no irreducible polynomial found");  // unreachable
    }

    uint32_t add_digitwise(uint32_t a, uint32_t b) const {
        uint32_t r = 0, mul = 1;
        for (uint32_t i = 0; i < e_; ++i) {
            r += ((a % p_ + b % p_) % p_) * mul;
            a /= p_; b /= p_; mul *= p_;
        }
        return r;
    }

    uint32_t neg_digitwise(uint32_t a) const {
        uint32_t r = 0, mul = 1;
        for (uint32_t i = 0; i < e_; ++i) {
            uint32_t d = a % p_;
            r += (d == 0 ? 0 : p_ - d) * mul;
            a /= p_; mul *= p_;
        }
        return r;
    }

    uint32_t mul_poly(uint32_t a, uint32_t b) const {
        std::vector<uint32_t> da = digits(a), db = digits(b);
        Poly prod(2 * e_, 0);
        for (uint32_t i = 0; i < e_; ++i) {
            if (da[i] == 0) continue;
            for (uint32_t j = 0; j < e_; ++j)
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        }
        prod = poly_mod(std::move(prod), modulus_, p_);
        uint32_t r = 0;
        for (uint32_t i = e_; i-- > 0;) r = r * p_ + (i < prod.size() ? prod[i] : 0);
        return r;
    }

    void build_log_tables() {
        // find a multiplicative generator by direct order computation
        uint32_t g = 0;
        for (uint32_t cand = 2; cand < q_ && g == 0; ++cand) {
            uint32_t x = cand, ord = 1;
            while (x != 1) { x = mul_poly(x, cand); ++ord; }
            if (ord == q_ - 1) g = cand;
        }
        if (g == 0) g = 1;  // q == 2: the group is trivial
        exp_.resize(2 * (q_ - 1));
        log_.assign(q_, 0);
        uint32_t x = 1;
        for (uint32_t i = 0; i < q_ - 1; ++i) {
            exp_[i] = x;
            exp_[i + (q_ - 1)] = x;
            log_[x] = i;
            x = mul_poly(x, g);
        }
    }

    uint32_t p_, e_, q_;
    Poly modulus_;
    std::vector<uint32_t> neg_table_;
    std::vector<uint16_t> add_table_;  // only for odd p, q <= 256
    std::vector<uint32_t> exp_, log_;  // only for q <= 4096
};

class FieldElement {
public:
    FieldElement() : fld_(nullptr), idx_(0) {}
    FieldElement(const FieldSpec& f, uint32_t idx) : fld_(&f), idx_(idx) {
        if (idx >= f.q()) throw std::invalid_argument("element index out of range");
    }

    const FieldSpec& field() const {
        if (!fld_) throw std::logic_error("use of default-constructed FieldElement");
        return *fld_;
    }
    uint32_t idx() const { return idx_; }
    bool is_zero() const { return idx_ == 0; }
    std::vector<uint32_t> rep() const { return field().digits(idx_); }

    FieldElement operator+(const FieldElement& o) const { return wrap(field().add_idx(idx_, same(o))); }
    FieldElement operator-(const FieldElement& o) const { return wrap(field().sub_idx(idx_, same(o))); }
    FieldElement operator*(const FieldElement& o) const { return wrap(field().mul_idx(idx_, same(o))); }
    FieldElement operator/(const FieldElement& o) const { return wrap(field().div_idx(idx_, same(o))); }
    FieldElement operator-() const { return wrap(field().neg_idx(idx_)); }
    FieldElement inv() const { return wrap(field().inv_idx(idx_)); }
    FieldElement pow(uint64_t k) const { return wrap(field().pow_idx(idx_, k)); }
    FieldElement frobenius(uint64_t base_q) const { return wrap(field().frobenius_idx(idx_, base_q)); }

    bool operator==(const FieldElement& o) const { return same(o) == idx_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

private:
    FieldElement wrap(uint32_t idx) const { return FieldElement(*fld_, idx); }
    // returns o's index after checking both elements live in the same field
    uint32_t same(const FieldElement& o) const {
        if (fld_ != o.fld_)
            throw std::invalid_argument("operands belong to different fields");
        return o.idx_;
    }
    friend class FieldSpec;
    const FieldSpec* fld_;
    uint32_t idx_;
};

inline FieldElement FieldSpec::element(uint32_t idx) const { return FieldElement(*this, idx); }
inline FieldElement FieldSpec::zero() const { return FieldElement(*this, 0); }
inline FieldElement FieldSpec::one() const { return FieldElement(*this, 1); }

inline FieldElement FieldSpec::gen() const {
    if (e_ < 2) throw std::logic_error("prime field has no extension generator");
    return FieldElement(*this, p_);
}

inline FieldElement FieldSpec::from_int(uint64_t k) const {
    return FieldElement(*this, static_cast<uint32_t>(k % p_));
}

inline std::vector<FieldElement> FieldSpec::enumerate_elements() const {
    std::vector<FieldElement> out;
    out.reserve(q_);
    for (uint32_t i = 0; i < q_; ++i) out.emplace_back(*this, i);
    return out;
}

// ---- element text syntax ----
//
// Prime fields: decimal digits ("0", "1", "2", ...).
// Extension fields: integer polynomial expressions in the generator symbol w,
// e.g. "w+1", "2*w^3+w", "(w+1)*(w+1)". Canonical output lists terms from the
// highest power of w down, with explicit '*' and '^'.

inline std::string format_element(const FieldElement& a) {
    const FieldSpec& F = a.field();
    if (F.e() == 1) return std::to_string(a.idx());
    if (a.idx() == 0) return "0";
    auto d = a.rep();
    std::string out;
    for (uint32_t i = F.e(); i-- > 0;) {
        if (d[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) { out += std::to_string(d[0]); continue; }
        if (d[i] != 1) out += std::to_string(d[i]) + "*";
        out += "w";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

namespace detail {

// Minimal recursive-descent parser for field-element expressions:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' uint]
//   atom   := uint | 'w' | '(' expr ')'
class ElementParser {
public:
    ElementParser(std::string_view text, const FieldSpec& F) : s_(text), F_(F) {}

    FieldElement parse() {
        FieldElement v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return v;
    }

private:
    FieldElement expr() {
        skip_ws();
        bool neg = consume('-');
        FieldElement v = term();
        if (neg) v = -v;
        for (;;) {
            skip_ws();
            if (consume('+')) v = v + term();
            else if (consume('-')) v = v - term();
            else return v;
        }
    }

    FieldElement term() {
        FieldElement v = factor();
        for (;;) {
            skip_ws();
            if (consume('*')) v = v * factor();
            else return v;
        }
    }

    FieldElement factor() {
        FieldElement v = atom();
        skip_ws();
        if (consume('^')) v = v.pow(uint_lit());
        return v;
    }

    FieldElement atom() {
        skip_ws();
        if (consume('(')) {
            FieldElement v = expr();
            skip_ws();
            if (!consume(')')) fail("expected ')'");
            return v;
        }
        if (pos_ < s_.size() && s_[pos_] == 'w') {
            ++pos_;
            if (F_.e() < 2) fail("symbol 'w' is undefined in a prime field");
            return F_.gen();
        }
        if (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') return F_.from_int(uint_lit());
        fail("expected element");
        return F_.zero();
    }

    uint64_t uint_lit() {
        skip_ws();
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
        throw std::invalid_argument("element parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view s_;
    const FieldSpec& F_;
    size_t pos_ = 0;
};

}  // namespace detail

inline FieldElement parse_element(std::string_view text, const FieldSpec& F) {
    return detail::ElementParser(text, F).parse();
}

}  // namespace linefree
