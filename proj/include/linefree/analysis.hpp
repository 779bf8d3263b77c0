// analysis.hpp — hypersurface analytics over interned projective spaces:
// exact point counts, line-freeness by coefficient vanishing, F_q-singular
// loci, tangent-hyperplane statistics t(H), per-hyperplane section reports,
// bound verdicts with the exceptional-quartic flag, and the brute-force
// subset-bound oracle.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "linefree/bounds.hpp"
#include "linefree/form.hpp"
#include "linefree/gf.hpp"
#include "linefree/projgeom.hpp"

namespace linefree {

inline const ProjectiveSpace& space_of(const HomogeneousForm& f) {
    return ProjectiveSpace::get(f.nvars() - 1, f.field());
}

// Monomial values of the degree-d basis at every point of the space;
// evaluating a coefficient vector is then a single pass per point.
class EvalTable {
public:
    static const EvalTable& get(const ProjectiveSpace& S, int degree) {
        static std::mutex mu;
        static std::map<std::tuple<int, uint32_t, int>, std::unique_ptr<EvalTable>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(S.n(), S.field().q(), degree);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<EvalTable>(new EvalTable(S, degree))).first;
        return *it->second;
    }

    size_t num_monomials() const { return M_; }
    size_t num_points() const { return npts_; }

    uint32_t value_at(size_t point, std::span<const uint32_t> coeffs) const {
        const FieldSpec& F = S_.field();
        const uint16_t* row = values_.data() + point * M_;
        uint32_t acc = 0;
        for (size_t m = 0; m < M_; ++m)
            if (coeffs[m] != 0) acc = F.add_idx(acc, F.mul_idx(coeffs[m], row[m]));
        return acc;
    }

    int64_t count_zeros(std::span<const uint32_t> coeffs) const {
        int64_t n = 0;
        for (size_t p = 0; p < npts_; ++p)
            if (value_at(p, coeffs) == 0) ++n;
        return n;
    }

    std::vector<int32_t> zero_points(std::span<const uint32_t> coeffs) const {
        std::vector<int32_t> out;
        for (size_t p = 0; p < npts_; ++p)
            if (value_at(p, coeffs) == 0) out.push_back(static_cast<int32_t>(p));
        return out;
    }

private:
    EvalTable(const ProjectiveSpace& S, int degree) : S_(S) {
        const MonomialBasis& B = MonomialBasis::get(S.n() + 1, degree);
        const FieldSpec& F = S.field();
        M_ = B.size();
        npts_ = S.points().size();
        values_.resize(M_ * npts_);
        for (size_t p = 0; p < npts_; ++p) {
            const auto& coords = S.points()[p].coords;
            for (size_t m = 0; m < M_; ++m) {
                const ExpVec& e = B.monomial(m);
                uint32_t v = 1;
                for (size_t i = 0; i < e.size() && v != 0; ++i)
                    if (e[i]) v = F.mul_idx(v, F.pow_idx(coords[i].idx(), e[i]));
                values_[p * M_ + m] = static_cast<uint16_t>(v);
            }
        }
    }

    const ProjectiveSpace& S_;
    size_t M_ = 0, npts_ = 0;
    std::vector<uint16_t> values_;
};

// Per-line restriction matrices: row k of line l maps a coefficient vector
// to coefficient k of its restriction to l. A line lies on the hypersurface
// iff all d+1 restriction coefficients vanish — a statement about
// coefficients, valid for every q (no point sampling involved).
class LineTable {
public:
    static const LineTable& get(const ProjectiveSpace& S, int degree) {
        static std::mutex mu;
        static std::map<std::tuple<int, uint32_t, int>, std::unique_ptr<LineTable>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(S.n(), S.field().q(), degree);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<LineTable>(new LineTable(S, degree))).first;
        return *it->second;
    }

    size_t num_lines() const { return nlines_; }

    bool line_on(size_t line, std::span<const uint32_t> coeffs) const {
        const FieldSpec& F = S_.field();
        const uint16_t* mat = rows_.data() + line * (d_ + 1) * M_;
        for (int k = 0; k <= d_; ++k) {
            uint32_t acc = 0;
            const uint16_t* row = mat + static_cast<size_t>(k) * M_;
            for (size_t m = 0; m < M_; ++m)
                if (coeffs[m] != 0) acc = F.add_idx(acc, F.mul_idx(coeffs[m], row[m]));
            if (acc != 0) return false;
        }
        return true;
    }

    bool line_free(std::span<const uint32_t> coeffs) const {
        for (size_t l = 0; l < nlines_; ++l)
            if (line_on(l, coeffs)) return false;
        return true;
    }

    std::vector<int32_t> lines_on(std::span<const uint32_t> coeffs) const {
        std::vector<int32_t> out;
        for (size_t l = 0; l < nlines_; ++l)
            if (line_on(l, coeffs)) out.push_back(static_cast<int32_t>(l));
        return out;
    }

private:
    LineTable(const ProjectiveSpace& S, int degree) : S_(S), d_(degree) {
        const MonomialBasis& B = MonomialBasis::get(S.n() + 1, degree);
        const FieldSpec& F = S.field();
        M_ = B.size();
        nlines_ = S.lines().size();
        rows_.resize(nlines_ * (d_ + 1) * M_);
        std::vector<uint32_t> unit(M_, 0);
        for (size_t l = 0; l < nlines_; ++l) {
            for (size_t m = 0; m < M_; ++m) {
                unit[m] = 1;
                HomogeneousForm mono = HomogeneousForm::from_coeff_vector(F, S.n() + 1, degree, unit);
                BinaryForm r = restrict_to_line(mono, S.lines()[l]);
                unit[m] = 0;
                for (int k = 0; k <= d_; ++k)
                    rows_[(l * (d_ + 1) + k) * M_ + m] = static_cast<uint16_t>(r.coeffs()[k]);
            }
        }
    }

    const ProjectiveSpace& S_;
    int d_;
    size_t M_ = 0, nlines_ = 0;
    std::vector<uint16_t> rows_;
};

// ---- basic analytics ----

inline int64_t count_points(const HomogeneousForm& f) {
    const ProjectiveSpace& S = space_of(f);
    return EvalTable::get(S, f.degree()).count_zeros(f.coeff_vector());
}

inline std::vector<int32_t> zero_set(const HomogeneousForm& f) {
    const ProjectiveSpace& S = space_of(f);
    return EvalTable::get(S, f.degree()).zero_points(f.coeff_vector());
}

inline std::vector<ProjLine> lines_on(const HomogeneousForm& f) {
    if (f.nvars() < 3) throw std::invalid_argument("lines_on requires n >= 2");
    const ProjectiveSpace& S = space_of(f);
    const LineTable& T = LineTable::get(S, f.degree());
    std::vector<ProjLine> out;
    for (int32_t l : T.lines_on(f.coeff_vector())) out.push_back(S.lines()[l]);
    return out;
}

inline bool is_line_free(const HomogeneousForm& f) {
    const ProjectiveSpace& S = space_of(f);
    return LineTable::get(S, f.degree()).line_free(f.coeff_vector());
}

// all n+1 formal partials as coefficient vectors of degree d-1 (all-zero
// vector when the formal partial is identically zero)
inline std::vector<std::vector<uint32_t>> gradient_coeff_vectors(const HomogeneousForm& f) {
    const MonomialBasis& B = MonomialBasis::get(f.nvars(), f.degree() - 1);
    std::vector<std::vector<uint32_t>> grad(f.nvars(), std::vector<uint32_t>(B.size(), 0));
    for (int i = 0; i < f.nvars(); ++i) {
        auto d = partial_derivative(f, i);
        if (d) grad[i] = d->coeff_vector();
    }
    return grad;
}

inline std::vector<ProjPoint> singular_points_fq(const HomogeneousForm& f) {
    const ProjectiveSpace& S = space_of(f);
    const EvalTable& E = EvalTable::get(S, f.degree());
    const EvalTable& Eg = EvalTable::get(S, f.degree() - 1);
    auto grad = gradient_coeff_vectors(f);
    std::vector<ProjPoint> out;
    for (int32_t p : E.zero_points(f.coeff_vector())) {
        bool singular = true;
        for (int i = 0; i < f.nvars() && singular; ++i)
            if (Eg.value_at(p, grad[i]) != 0) singular = false;
        if (singular) out.push_back(S.points()[p]);
    }
    return out;
}

// Tangent hyperplane at a nonsingular point of X, cut out by the gradient.
inline Hyperplane tangent_hyperplane(const HomogeneousForm& f, const ProjPoint& P) {
    const FieldSpec& F = f.field();
    if (!f.vanishes_at(P)) throw std::invalid_argument("tangent_hyperplane: point is not on the hypersurface");
    Coords dual;
    dual.reserve(f.nvars());
    bool all_zero = true;
    for (int i = 0; i < f.nvars(); ++i) {
        auto d = partial_derivative(f, i);
        uint32_t v = d ? d->evaluate(P).idx() : 0;
        if (v != 0) all_zero = false;
        dual.push_back(FieldElement(F, v));
    }
    if (all_zero) throw std::invalid_argument("tangent_hyperplane: point is singular");
    return Hyperplane(std::move(dual));
}

// ---- profiling ----

struct ProfileOptions {
    enum class SectionPath { Auto, PointFilter, Restriction };
    SectionPath path = SectionPath::Auto;
    int threads = 1;
};

struct SurfaceProfile {
    int64_t N = 0;
    std::vector<ProjLine> lines;             // F_q-lines contained in X
    std::vector<ProjPoint> singular_points;  // F_q-singular points of X
    // per hyperplane (enumeration order): section point count and
    // t = #{smooth P in X(F_q) : H = T_P X}
    std::vector<std::pair<int64_t, int>> per_hyperplane;
    std::vector<int64_t> n_histogram;  // index j = #{H : t(H) = j}, length >= 6
    int max_t = 0;
};

namespace detail {

template <typename Fn>
inline void parallel_over(size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline SurfaceProfile profile(const HomogeneousForm& f, const ProfileOptions& opts = {}) {
    const ProjectiveSpace& S = space_of(f);
    const FieldSpec& F = f.field();
    int n = S.n();
    const EvalTable& E = EvalTable::get(S, f.degree());
    const EvalTable& Eg = EvalTable::get(S, f.degree() - 1);
    auto coeffs = f.coeff_vector();
    auto grad = gradient_coeff_vectors(f);

    SurfaceProfile prof;
    std::vector<int32_t> zeros = E.zero_points(coeffs);
    prof.N = static_cast<int64_t>(zeros.size());
    prof.lines = lines_on(f);

    size_t nh = S.hyperplanes().size();
    std::vector<int64_t> sections(nh, 0);
    std::vector<int> tcount(nh, 0);

    for (int32_t p : zeros) {
        Coords dual;
        dual.reserve(f.nvars());
        bool all_zero = true;
        for (int i = 0; i < f.nvars(); ++i) {
            uint32_t v = Eg.value_at(p, grad[i]);
            if (v != 0) all_zero = false;
            dual.push_back(FieldElement(F, v));
        }
        if (all_zero) {
            prof.singular_points.push_back(S.points()[p]);
        } else {
            Hyperplane T(std::move(dual));
            ++tcount[S.hyperplane_index(T)];
        }
    }

    bool restriction_path = opts.path == ProfileOptions::SectionPath::Restriction ||
                            (opts.path == ProfileOptions::SectionPath::Auto && S.points().size() > 4096);
    if (restriction_path) {
        const ProjectiveSpace& Ssub = ProjectiveSpace::get(n - 1, F);
        const EvalTable& Esub = EvalTable::get(Ssub, f.degree());
        detail::parallel_over(nh, opts.threads, [&](size_t h) {
            auto r = restrict_to_hyperplane(f, S.hyperplanes()[h]);
            sections[h] = r ? Esub.count_zeros(r->coeff_vector())
                            : static_cast<int64_t>(Ssub.points().size());
        });
    } else {
        for (int32_t p : zeros)
            for (int32_t h : S.hyperplanes_through_point(p)) ++sections[h];
    }

    prof.per_hyperplane.resize(nh);
    for (size_t h = 0; h < nh; ++h) {
        prof.per_hyperplane[h] = {sections[h], tcount[h]};
        prof.max_t = std::max(prof.max_t, tcount[h]);
    }
    prof.n_histogram.assign(std::max(6, prof.max_t + 1), 0);
    for (size_t h = 0; h < nh; ++h) ++prof.n_histogram[tcount[h]];

    // internal consistency: every point lies on theta_q(n-1) hyperplanes,
    // and each smooth point contributes one tangent hyperplane
    int64_t theta_nm1 = theta(F.q(), n - 1).as_integer();
    int64_t sec_sum = 0;
    for (size_t h = 0; h < nh; ++h) sec_sum += sections[h];
    if (sec_sum != prof.N * theta_nm1)
        throw std::logic_error("profile invariant failed: section double count");
    int64_t nj_sum = 0, jnj_sum = 0;
    for (size_t j = 0; j < prof.n_histogram.size(); ++j) {
        nj_sum += prof.n_histogram[j];
        jnj_sum += static_cast<int64_t>(j) * prof.n_histogram[j];
    }
    if (nj_sum != static_cast<int64_t>(nh))
        throw std::logic_error("profile invariant failed: histogram total");
    if (prof.singular_points.empty() && jnj_sum != prof.N)
        throw std::logic_error("profile invariant failed: tangent tally");
    return prof;
}

// A conic (degree 2, three variables) is absolutely irreducible iff it has
// no F_q-rational singular point: a degenerate conic's singular point is
// Frobenius-stable, hence F_q-rational, and formally singular.
inline bool conic_is_absolutely_irreducible(const HomogeneousForm& g) {
    if (g.degree() != 2 || g.nvars() != 3)
        throw std::invalid_argument("conic_is_absolutely_irreducible expects a ternary quadratic form");
    return singular_points_fq(g).empty();
}

// ---- bound verdicts and the exceptional quartic ----

enum class BoundStatus { Within, Attains, Exceeds };

inline const char* to_string(BoundStatus s) {
    switch (s) {
        case BoundStatus::Within: return "WITHIN";
        case BoundStatus::Attains: return "ATTAINS";
        case BoundStatus::Exceeds: return "EXCEEDS";
    }
    return "?";
}

struct BoundVerdict {
    long long bound = 0;
    int64_t N = 0;
    BoundStatus status = BoundStatus::Within;
    bool exception_flag = false;  // PGL(3,4)-equivalent to the 14-point quartic
};

// The exceptional plane quartic over F_4 with 14 rational points.
inline const HomogeneousForm& k_quartic() {
    static const HomogeneousForm K =
        parse_form("(x0+x1+x2)^4 + (x0*x1+x1*x2+x2*x0)^2 + x0*x1*x2*(x0+x1+x2)",
                   FieldSpec::get(2, 2), 3);
    return K;
}

inline std::filesystem::path cache_directory() {
    if (const char* env = std::getenv("LINEFREE_CACHE_DIR")) return env;
    return ".linefree-cache";
}

namespace detail {

inline uint32_t pack_f4_quartic(std::span<const uint32_t> coeffs) {
    // 15 coefficients in F_4, 2 bits each
    uint32_t v = 0;
    for (size_t i = 0; i < 15; ++i) v |= (coeffs[i] & 3u) << (2 * i);
    return v;
}

inline std::vector<uint32_t> normalize_scaling(const FieldSpec& F, std::vector<uint32_t> coeffs) {
    for (uint32_t c : coeffs) {
        if (c != 0) {
            if (c != 1) {
                uint32_t s = F.inv_idx(c);
                for (auto& x : coeffs) x = F.mul_idx(x, s);
            }
            return coeffs;
        }
    }
    throw std::invalid_argument("zero coefficient vector");
}

}  // namespace detail

// Orbit of the exceptional quartic under PGL(3,4), as the set of packed
// scale-normalized coefficient vectors. Computed once (~60480 substitutions)
// and cached on disk, keyed by the monomial-order version.
class KOrbit {
public:
    static const KOrbit& get() {
        static KOrbit orbit;
        return orbit;
    }

    size_t size() const { return sorted_.size(); }

    bool contains_packed(uint32_t packed) const {
        return std::binary_search(sorted_.begin(), sorted_.end(), packed);
    }

    bool contains(const HomogeneousForm& g) const {
        auto norm = detail::normalize_scaling(g.field(), g.coeff_vector());
        return contains_packed(detail::pack_f4_quartic(norm));
    }

private:
    KOrbit() {
        auto path = cache_directory() / "k_orbit_mono_v1.bin";
        if (load(path)) return;
        compute();
        save(path);  // best effort
    }

    void compute() {
        const FieldSpec& F4 = FieldSpec::get(2, 2);
        const HomogeneousForm& K = k_quartic();
        std::unordered_set<uint32_t> set;
        for (const auto& M : enumerate_pgl(2, F4)) {
            auto img = apply_map(K, M);
            auto norm = detail::normalize_scaling(F4, img.coeff_vector());
            set.insert(detail::pack_f4_quartic(norm));
        }
        sorted_.assign(set.begin(), set.end());
        std::sort(sorted_.begin(), sorted_.end());
    }

    bool load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return false;
        char magic[4];
        uint32_t version = 0;
        uint64_t count = 0;
        in.read(magic, 4);
        in.read(reinterpret_cast<char*>(&version), 4);
        in.read(reinterpret_cast<char*>(&count), 8);
        if (!in || std::string(magic, 4) != "LFKO" || version != 1 || count == 0 || count > 100000)
            return false;
        sorted_.resize(count);
        in.read(reinterpret_cast<char*>(sorted_.data()), static_cast<std::streamsize>(count * 4));
        if (!in || !std::is_sorted(sorted_.begin(), sorted_.end())) {
            sorted_.clear();
            return false;
        }
        return true;
    }

    void save(const std::filesystem::path& path) const {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary);
        if (!out) return;
        uint32_t version = 1;
        uint64_t count = sorted_.size();
        out.write("LFKO", 4);
        out.write(reinterpret_cast<const char*>(&version), 4);
        out.write(reinterpret_cast<const char*>(&count), 8);
        out.write(reinterpret_cast<const char*>(sorted_.data()), static_cast<std::streamsize>(count * 4));
    }

    std::vector<uint32_t> sorted_;
};

inline bool is_equivalent_to_K(const HomogeneousForm& g) {
    if (g.nvars() != 3 || g.degree() != 4 || g.field().q() != 4 || g.field().p() != 2)
        throw std::invalid_argument("is_equivalent_to_K expects a plane quartic over F_4");
    if (count_points(g) != 14) return false;  // cheap filter; orbit membership decides
    return KOrbit::get().contains(g);
}

// Verdict of N against the line-free hypersurface bound. Errors when the
// hypersurface is not line-free (the bound does not apply).
inline BoundVerdict check_bound(const HomogeneousForm& f) {
    int n = f.nvars() - 1;
    if (n < 2) throw std::invalid_argument("check_bound requires n >= 2");
    if (!is_line_free(f))
        throw std::invalid_argument("check_bound: hypersurface contains F_q-lines; bound not applicable");
    BoundVerdict v;
    v.N = count_points(f);
    v.bound = main_bound(n, f.degree(), f.field().q());
    v.status = v.N < v.bound ? BoundStatus::Within
             : v.N == v.bound ? BoundStatus::Attains
                              : BoundStatus::Exceeds;
    if (n == 2 && f.degree() == 4 && f.field().q() == 4 && v.N == 14)
        v.exception_flag = is_equivalent_to_K(f);
    return v;
}

// ---- subset-section oracle ----

inline int max_section(std::span<const int32_t> point_indices, const ProjectiveSpace& S) {
    std::vector<int> cnt(S.hyperplanes().size(), 0);
    int best = 0;
    for (int32_t p : point_indices)
        for (int32_t h : S.hyperplanes_through_point(p)) best = std::max(best, ++cnt[h]);
    return best;
}

inline int max_section(const std::vector<ProjPoint>& pts, int n, const FieldSpec& F) {
    const ProjectiveSpace& S = ProjectiveSpace::get(n, F);
    std::vector<int32_t> idx;
    idx.reserve(pts.size());
    for (const auto& P : pts) idx.push_back(static_cast<int32_t>(S.point_index(P)));
    return max_section(idx, S);
}

struct OracleResult {
    bool ok = false;
    uint64_t subsets_checked = 0;
};

// Exhaustive check of the subset-section bound over ALL subsets S of
// P^n(F_q): with delta = max_H |S ∩ H|, asserts
// |S| <= (delta-1)q + 1 + floor((delta-1)/theta_q(n-2)).
// The empty subset is vacuously fine (delta >= 1 needs a point). Guarded at
// 2^theta_q(n) <= 2^16.
inline OracleResult oracle_subset_bound(int n, const FieldSpec& F) {
    const ProjectiveSpace& S = ProjectiveSpace::get(n, F);
    size_t npts = S.points().size();
    if (npts > 16) throw std::invalid_argument("oracle_subset_bound guard: 2^theta_q(n) exceeds 2^16");
    std::vector<uint32_t> hyper_mask(S.hyperplanes().size(), 0);
    for (size_t h = 0; h < hyper_mask.size(); ++h)
        for (int32_t p : S.points_on_hyperplane(static_cast<int>(h)))
            hyper_mask[h] |= 1u << p;
    std::vector<long long> bound(npts + 1, 0);
    for (size_t d = 1; d <= npts; ++d) bound[d] = subset_section_bound(static_cast<long long>(d), n, F.q());

    OracleResult res;
    res.ok = true;
    uint64_t total = 1ull << npts;
    for (uint64_t s = 1; s < total; ++s) {
        int delta = 0;
        for (uint32_t hm : hyper_mask)
            delta = std::max(delta, std::popcount(static_cast<uint32_t>(s) & hm));
        if (std::popcount(static_cast<uint32_t>(s)) > bound[delta]) {
            res.ok = false;
            break;
        }
    }
    res.subsets_checked = total;  // includes the vacuous empty subset
    return res;
}

// x0*x1 + x2^2 + b*x2*x3 + c*x3^2 with the binary part irreducible over
// F_q (first such (b, c) in index order): a smooth quadric surface with no
// F_q-lines and q^2 + 1 rational points.
inline HomogeneousForm elliptic_quadric(const FieldSpec& F) {
    for (uint32_t b = 0; b < F.q(); ++b) {
        for (uint32_t c = 0; c < F.q(); ++c) {
            // t^2 + b t + c irreducible <=> x2^2 + b x2 x3 + c x3^2 has no
            // projective F_q-zero
            bool has_root = (c == 0);
            for (uint32_t t = 0; t < F.q() && !has_root; ++t) {
                uint32_t v = F.add_idx(F.mul_idx(t, t), F.add_idx(F.mul_idx(b, t), c));
                if (v == 0) has_root = true;
            }
            if (has_root) continue;
            detail::SparsePoly p(F, 4);
            ExpVec e(4, 0);
            e[0] = 1; e[1] = 1;
            p.add_term(e, 1);
            e = {0, 0, 2, 0};
            p.add_term(e, 1);
            e = {0, 0, 1, 1};
            p.add_term(e, b);
            e = {0, 0, 0, 2};
            p.add_term(e, c);
            return HomogeneousForm(F, 4, std::move(p));
        }
    }
    throw std::logic_error("no irreducible binary quadratic over F_q");  // unreachable
}

// For quartic surfaces in P^3 over F_4 with an F_4-singular point: is the
// point count within 2*theta_4(2) + 1 = 43?
inline bool singular_case_bound_check(const HomogeneousForm& f) {
    if (f.nvars() != 4 || f.degree() != 4 || f.field().q() != 4)
        throw std::invalid_argument("singular_case_bound_check expects a quartic surface over F_4");
    if (singular_points_fq(f).empty())
        throw std::invalid_argument("singular_case_bound_check requires an F_4-singular point");
    return count_points(f) <= 43;
}

// ---- section report serialization (docs/report-schema.md) ----

inline nlohmann::json section_report_json(const HomogeneousForm& f, const SurfaceProfile& prof) {
    const FieldSpec& F = f.field();
    const ProjectiveSpace& S = space_of(f);
    int n = S.n();
    nlohmann::json j;
    j["schema"] = "section-report/v1";
    j["field"] = {{"p", F.p()}, {"e", F.e()}, {"q", F.q()}};
    j["n"] = n;
    j["degree"] = f.degree();
    j["form"] = format_form(f);
    j["N"] = prof.N;
    j["line_count"] = prof.lines.size();
    j["singular_count"] = prof.singular_points.size();
    j["hypothesis"] = prof.singular_points.empty() ? "ok" : "violated";
    if (prof.lines.empty()) {
        long long bound = main_bound(n, f.degree(), F.q());
        j["bound"] = bound;
        BoundStatus st = prof.N < bound ? BoundStatus::Within
                       : prof.N == bound ? BoundStatus::Attains
                                         : BoundStatus::Exceeds;
        j["status"] = to_string(st);
        if (n == 2 && f.degree() == 4 && F.q() == 4 && prof.N == 14)
            j["k_exception"] = is_equivalent_to_K(f);
    } else {
        j["status"] = "NOT_APPLICABLE";
    }
    j["n_histogram"] = prof.n_histogram;
    nlohmann::json per = nlohmann::json::array();
    for (size_t h = 0; h < prof.per_hyperplane.size(); ++h) {
        const Hyperplane& H = S.hyperplanes()[h];
        std::vector<uint32_t> dual(H.dual.size());
        for (size_t i = 0; i < dual.size(); ++i) dual[i] = H.dual[i].idx();
        per.push_back({{"dual", dual},
                       {"section_count", prof.per_hyperplane[h].first},
                       {"t", prof.per_hyperplane[h].second}});
    }
    j["per_hyperplane"] = std::move(per);
    return j;
}

}  // namespace linefree
