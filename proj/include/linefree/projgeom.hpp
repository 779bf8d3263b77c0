// projgeom.hpp — points, hyperplanes, lines and PGL(n+1, q) for P^n(F_q).
//
// Conventions (frozen; report files and golden tests depend on them, see
// docs/enumeration.md):
//   * Points and hyperplane dual vectors are normalized so the leftmost
//     nonzero coordinate equals 1.
//   * Enumeration walks the standard affine charts by position of the
//     leading 1 (position 0 first); the free coordinates run through all
//     tuples with the rightmost coordinate varying fastest, element index
//     ascending.
//   * Lines are canonicalized as the reduced row echelon form of a 2x(n+1)
//     basis matrix; enumeration is by pivot-column pair, then free entries.
//   * Projective maps are invertible (n+1)x(n+1) matrices scaled so the
//     first nonzero entry in row-major order is 1.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "linefree/gf.hpp"

namespace linefree {

using Coords = std::vector<FieldElement>;

namespace detail {

inline void normalize_in_place(Coords& v) {
    for (auto& c : v) {
        if (!c.is_zero()) {
            if (c.idx() == 1) return;  // already monic
            FieldElement s = c.inv();
            for (auto& x : v) x = x * s;
            return;
        }
    }
    throw std::invalid_argument("projective coordinates must not be all zero");
}

inline std::string pack_key(const std::vector<uint32_t>& idxs) {
    std::string s(idxs.size() * 2, '\0');
    for (size_t i = 0; i < idxs.size(); ++i) {
        s[2 * i] = static_cast<char>(idxs[i] & 0xff);
        s[2 * i + 1] = static_cast<char>((idxs[i] >> 8) & 0xff);
    }
    return s;
}

}  // namespace detail

struct ProjPoint {
    Coords coords;  // normalized, length n+1

    ProjPoint() = default;
    explicit ProjPoint(Coords c) : coords(std::move(c)) { detail::normalize_in_place(coords); }

    int n() const { return static_cast<int>(coords.size()) - 1; }
    const FieldSpec& field() const { return coords.at(0).field(); }

    bool operator==(const ProjPoint& o) const {
        if (coords.size() != o.coords.size()) return false;
        for (size_t i = 0; i < coords.size(); ++i)
            if (coords[i] != o.coords[i]) return false;
        return true;
    }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }
};

struct Hyperplane {
    Coords dual;  // normalized, length n+1

    Hyperplane() = default;
    explicit Hyperplane(Coords c) : dual(std::move(c)) { detail::normalize_in_place(dual); }

    int n() const { return static_cast<int>(dual.size()) - 1; }

    bool contains(const ProjPoint& P) const {
        const FieldSpec& F = P.field();
        if (dual.size() != P.coords.size() || &dual.at(0).field() != &F)
            throw std::invalid_argument("hyperplane/point space mismatch");
        uint32_t acc = 0;
        for (size_t i = 0; i < dual.size(); ++i)
            acc = F.add_idx(acc, F.mul_idx(dual[i].idx(), P.coords[i].idx()));
        return acc == 0;
    }

    bool operator==(const Hyperplane& o) const {
        if (dual.size() != o.dual.size()) return false;
        for (size_t i = 0; i < dual.size(); ++i)
            if (dual[i] != o.dual[i]) return false;
        return true;
    }
    bool operator!=(const Hyperplane& o) const { return !(*this == o); }
};

// A line of P^n, held as the canonical RREF basis of its 2-dimensional
// linear span. row(0) and row(1) each have length n+1.
struct ProjLine {
    Coords basis;  // 2*(n+1), row-major, reduced row echelon form

    int n() const { return static_cast<int>(basis.size()) / 2 - 1; }
    const FieldElement& at(int row, int col) const { return basis[row * (n() + 1) + col]; }

    std::vector<uint32_t> idx_vector() const {
        std::vector<uint32_t> v(basis.size());
        for (size_t i = 0; i < basis.size(); ++i) v[i] = basis[i].idx();
        return v;
    }

    std::string key() const { return detail::pack_key(idx_vector()); }

    bool operator==(const ProjLine& o) const { return basis.size() == o.basis.size() && idx_vector() == o.idx_vector(); }
    bool operator!=(const ProjLine& o) const { return !(*this == o); }
};

// Canonicalizes a 2x(n+1) matrix of rank 2 into RREF. Throws if rank < 2.
inline ProjLine make_line(const Coords& row0, const Coords& row1) {
    if (row0.size() != row1.size() || row0.size() < 2)
        throw std::invalid_argument("line basis rows must have equal length >= 2");
    const FieldSpec& F = row0.at(0).field();
    size_t m = row0.size();
    std::vector<uint32_t> r0(m), r1(m);
    for (size_t i = 0; i < m; ++i) { r0[i] = row0[i].idx(); r1[i] = row1[i].idx(); }

    size_t c1 = 0;
    while (c1 < m && r0[c1] == 0 && r1[c1] == 0) ++c1;
    if (c1 == m) throw std::invalid_argument("line basis has rank 0");
    if (r0[c1] == 0) std::swap(r0, r1);
    uint32_t s = F.inv_idx(r0[c1]);
    for (size_t i = 0; i < m; ++i) r0[i] = F.mul_idx(r0[i], s);
    if (r1[c1] != 0) {
        uint32_t f = r1[c1];
        for (size_t i = 0; i < m; ++i) r1[i] = F.sub_idx(r1[i], F.mul_idx(f, r0[i]));
    }
    size_t c2 = c1 + 1;
    while (c2 < m && r1[c2] == 0) ++c2;
    if (c2 == m) throw std::invalid_argument("line basis has rank 1 (coincident points)");
    s = F.inv_idx(r1[c2]);
    for (size_t i = 0; i < m; ++i) r1[i] = F.mul_idx(r1[i], s);
    if (r0[c2] != 0) {
        uint32_t f = r0[c2];
        for (size_t i = 0; i < m; ++i) r0[i] = F.sub_idx(r0[i], F.mul_idx(f, r1[i]));
    }

    ProjLine l;
    l.basis.reserve(2 * m);
    for (size_t i = 0; i < m; ++i) l.basis.push_back(FieldElement(F, r0[i]));
    for (size_t i = 0; i < m; ++i) l.basis.push_back(FieldElement(F, r1[i]));
    return l;
}

inline ProjLine line_through(const ProjPoint& P, const ProjPoint& Q) {
    if (P == Q) throw std::invalid_argument("line_through requires two distinct points");
    return make_line(P.coords, Q.coords);
}

// Invertible projective transformation, unique representative per PGL class.
struct ProjectiveMap {
    int n = 0;
    Coords matrix;  // (n+1)^2 entries, row-major, first nonzero entry = 1

    static ProjectiveMap from_matrix(int n, Coords m) {
        ProjectiveMap M;
        M.n = n;
        M.matrix = std::move(m);
        size_t dim = static_cast<size_t>(n) + 1;
        if (M.matrix.size() != dim * dim) throw std::invalid_argument("matrix size mismatch");
        detail::normalize_in_place(M.matrix);
        if (!M.invertible()) throw std::invalid_argument("projective map must be invertible");
        return M;
    }

    static ProjectiveMap identity(int n, const FieldSpec& F) {
        size_t dim = static_cast<size_t>(n) + 1;
        Coords m(dim * dim, F.zero());
        for (size_t i = 0; i < dim; ++i) m[i * dim + i] = F.one();
        ProjectiveMap M;
        M.n = n;
        M.matrix = std::move(m);
        return M;
    }

    const FieldSpec& field() const { return matrix.at(0).field(); }
    const FieldElement& at(int r, int c) const { return matrix[r * (n + 1) + c]; }

    ProjPoint apply(const ProjPoint& P) const {
        const FieldSpec& F = field();
        int dim = n + 1;
        Coords out;
        out.reserve(dim);
        for (int r = 0; r < dim; ++r) {
            uint32_t acc = 0;
            for (int c = 0; c < dim; ++c)
                acc = F.add_idx(acc, F.mul_idx(at(r, c).idx(), P.coords[c].idx()));
            out.push_back(FieldElement(F, acc));
        }
        return ProjPoint(std::move(out));
    }

    // this ∘ other: apply other first.
    ProjectiveMap compose(const ProjectiveMap& other) const {
        const FieldSpec& F = field();
        int dim = n + 1;
        Coords m(static_cast<size_t>(dim) * dim, F.zero());
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                uint32_t acc = 0;
                for (int k = 0; k < dim; ++k)
                    acc = F.add_idx(acc, F.mul_idx(at(r, k).idx(), other.at(k, c).idx()));
                m[r * dim + c] = FieldElement(F, acc);
            }
        return from_matrix(n, std::move(m));
    }

    ProjectiveMap inverse() const {
        const FieldSpec& F = field();
        int dim = n + 1;
        // Gauss-Jordan on [A | I]
        std::vector<std::vector<uint32_t>> a(dim, std::vector<uint32_t>(2 * dim, 0));
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) a[r][c] = at(r, c).idx();
            a[r][dim + r] = 1;
        }
        for (int col = 0; col < dim; ++col) {
            int piv = -1;
            for (int r = col; r < dim; ++r)
                if (a[r][col] != 0) { piv = r; break; }
            if (piv < 0) throw std::logic_error("singular matrix in ProjectiveMap::inverse");
            std::swap(a[col], a[piv]);
            uint32_t s = F.inv_idx(a[col][col]);
            for (int c = 0; c < 2 * dim; ++c) a[col][c] = F.mul_idx(a[col][c], s);
            for (int r = 0; r < dim; ++r) {
                if (r == col || a[r][col] == 0) continue;
                uint32_t f = a[r][col];
                for (int c = 0; c < 2 * dim; ++c)
                    a[r][c] = F.sub_idx(a[r][c], F.mul_idx(f, a[col][c]));
            }
        }
        Coords m;
        m.reserve(static_cast<size_t>(dim) * dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) m.push_back(FieldElement(F, a[r][dim + c]));
        return from_matrix(n, std::move(m));
    }

    bool invertible() const {
        const FieldSpec& F = field();
        int dim = n + 1;
        std::vector<std::vector<uint32_t>> a(dim, std::vector<uint32_t>(dim));
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) a[r][c] = at(r, c).idx();
        for (int col = 0; col < dim; ++col) {
            int piv = -1;
            for (int r = col; r < dim; ++r)
                if (a[r][col] != 0) { piv = r; break; }
            if (piv < 0) return false;
            std::swap(a[col], a[piv]);
            uint32_t s = F.inv_idx(a[col][col]);
            for (int c = col; c < dim; ++c) a[col][c] = F.mul_idx(a[col][c], s);
            for (int r = col + 1; r < dim; ++r) {
                if (a[r][col] == 0) continue;
                uint32_t f = a[r][col];
                for (int c = col; c < dim; ++c)
                    a[r][c] = F.sub_idx(a[r][c], F.mul_idx(f, a[col][c]));
            }
        }
        return true;
    }

    std::vector<uint32_t> idx_vector() const {
        std::vector<uint32_t> v(matrix.size());
        for (size_t i = 0; i < matrix.size(); ++i) v[i] = matrix[i].idx();
        return v;
    }

    bool operator==(const ProjectiveMap& o) const { return n == o.n && idx_vector() == o.idx_vector(); }
};

// Interned geometry of P^n(F_q): point/hyperplane/line tables with dense
// integer indices, plus incidence lists. Built once per (n, q) and shared
// read-only afterwards.
class ProjectiveSpace {
public:
    static const ProjectiveSpace& get(int n, const FieldSpec& F) {
        static std::mutex mu;
        static std::map<std::pair<int, uint32_t>, std::unique_ptr<ProjectiveSpace>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(n, F.q());
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<ProjectiveSpace>(new ProjectiveSpace(n, F))).first;
        return *it->second;
    }

    int n() const { return n_; }
    const FieldSpec& field() const { return F_; }
    int64_t num_points() const { return static_cast<int64_t>(points_.size()); }

    const std::vector<ProjPoint>& points() const { return points_; }
    const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
    const std::vector<ProjLine>& lines() const { return lines_; }

    // dense index of a point, computed arithmetically from the chart layout
    int point_index(const ProjPoint& P) const { return index_of_normalized(P.coords); }
    int hyperplane_index(const Hyperplane& H) const { return index_of_normalized(H.dual); }

    int line_index(const ProjLine& l) const {
        auto it = line_index_.find(l.key());
        if (it == line_index_.end()) throw std::invalid_argument("line does not belong to this space");
        return it->second;
    }

    const std::vector<int32_t>& points_on_hyperplane(int h) const { return pts_on_hyper_[h]; }
    const std::vector<int32_t>& hyperplanes_through_point(int p) const { return hypers_through_pt_[p]; }
    const std::vector<int32_t>& points_on_line(int l) const { return pts_on_line_[l]; }
    const std::vector<int32_t>& lines_through_point(int p) const { return lines_through_pt_[p]; }

    std::vector<int32_t> hyperplanes_through_line(int l) const {
        std::vector<int32_t> out;
        const ProjLine& L = lines_[l];
        int dim = n_ + 1;
        for (size_t h = 0; h < hyperplanes_.size(); ++h) {
            uint32_t d0 = 0, d1 = 0;
            for (int c = 0; c < dim; ++c) {
                uint32_t hc = hyperplanes_[h].dual[c].idx();
                d0 = F_.add_idx(d0, F_.mul_idx(hc, L.at(0, c).idx()));
                d1 = F_.add_idx(d1, F_.mul_idx(hc, L.at(1, c).idx()));
            }
            if (d0 == 0 && d1 == 0) out.push_back(static_cast<int32_t>(h));
        }
        return out;
    }

private:
    ProjectiveSpace(int n, const FieldSpec& F) : n_(n), F_(F) {
        if (n < 1) throw std::invalid_argument("projective space requires n >= 1");
        if (F.q() > 16) throw std::invalid_argument("geometry is capped at q <= 16");
        uint64_t theta_n = 0, qp = 1;
        for (int i = 0; i <= n; ++i) { theta_n += qp; qp *= F.q(); }
        if (theta_n > (1u << 20)) throw std::invalid_argument("projective space too large to intern");

        build_points();
        build_incidence();
        build_lines();
    }

    void build_points() {
        int dim = n_ + 1;
        uint32_t q = F_.q();
        for (int lead = 0; lead < dim; ++lead) {
            int free = dim - lead - 1;
            std::vector<uint32_t> digits(free, 0);
            for (;;) {
                Coords c;
                c.reserve(dim);
                for (int i = 0; i < lead; ++i) c.push_back(F_.zero());
                c.push_back(F_.one());
                for (int i = 0; i < free; ++i) c.push_back(FieldElement(F_, digits[i]));
                ProjPoint P;
                P.coords = std::move(c);  // already normalized by construction
                points_.push_back(std::move(P));
                // odometer, rightmost fastest
                int i = free - 1;
                while (i >= 0 && ++digits[i] == q) digits[i--] = 0;
                if (i < 0) break;
            }
        }
        hyperplanes_.reserve(points_.size());
        for (const auto& P : points_) {
            Hyperplane H;
            H.dual = P.coords;
            hyperplanes_.push_back(std::move(H));
        }
    }

    int index_of_normalized(const Coords& v) const {
        if (static_cast<int>(v.size()) != n_ + 1)
            throw std::invalid_argument("coordinate length mismatch");
        uint64_t q = F_.q();
        int dim = n_ + 1;
        int lead = 0;
        while (lead < dim && v[lead].is_zero()) ++lead;
        if (lead == dim || v[lead].idx() != 1)
            throw std::invalid_argument("coordinates are not normalized");
        // chart for lead position k occupies a block of q^{dim-1-k} indices
        uint64_t offset = 0;
        for (int k = 0; k < lead; ++k) {
            uint64_t block = 1;
            for (int i = 0; i < dim - 1 - k; ++i) block *= q;
            offset += block;
        }
        uint64_t idx = 0;
        for (int i = lead + 1; i < dim; ++i) idx = idx * q + v[i].idx();
        return static_cast<int>(offset + idx);
    }

    void build_incidence() {
        size_t np = points_.size();
        pts_on_hyper_.assign(np, {});
        hypers_through_pt_.assign(np, {});
        for (size_t h = 0; h < np; ++h) {
            for (size_t p = 0; p < np; ++p) {
                if (hyperplanes_[h].contains(points_[p])) {
                    pts_on_hyper_[h].push_back(static_cast<int32_t>(p));
                    hypers_through_pt_[p].push_back(static_cast<int32_t>(h));
                }
            }
        }
    }

    void build_lines() {
        int dim = n_ + 1;
        uint32_t q = F_.q();
        // enumerate RREF matrices by pivot pair (c1 < c2), then free entries
        for (int c1 = 0; c1 < dim; ++c1) {
            for (int c2 = c1 + 1; c2 < dim; ++c2) {
                std::vector<int> free_pos;  // row-major positions of free entries
                for (int c = c1 + 1; c < dim; ++c)
                    if (c != c2) free_pos.push_back(c);  // row 0
                for (int c = c2 + 1; c < dim; ++c) free_pos.push_back(dim + c);  // row 1
                std::vector<uint32_t> digits(free_pos.size(), 0);
                for (;;) {
                    Coords basis(2 * dim, F_.zero());
                    basis[c1] = F_.one();
                    basis[dim + c2] = F_.one();
                    for (size_t i = 0; i < free_pos.size(); ++i)
                        basis[free_pos[i]] = FieldElement(F_, digits[i]);
                    ProjLine l;
                    l.basis = std::move(basis);
                    line_index_[l.key()] = static_cast<int>(lines_.size());
                    lines_.push_back(std::move(l));
                    int i = static_cast<int>(free_pos.size()) - 1;
                    while (i >= 0 && ++digits[i] == q) digits[i--] = 0;
                    if (i < 0) break;
                }
            }
        }
        // point lists per line: charts of P^1 in order (1:t), t ascending, then (0:1)
        pts_on_line_.resize(lines_.size());
        lines_through_pt_.assign(points_.size(), {});
        for (size_t li = 0; li < lines_.size(); ++li) {
            const ProjLine& l = lines_[li];
            for (uint32_t t = 0; t <= q; ++t) {
                Coords c(dim, F_.zero());
                for (int i = 0; i < dim; ++i) {
                    uint32_t v;
                    if (t < q)
                        v = F_.add_idx(l.at(0, i).idx(), F_.mul_idx(t, l.at(1, i).idx()));
                    else
                        v = l.at(1, i).idx();
                    c[i] = FieldElement(F_, v);
                }
                ProjPoint P(std::move(c));
                int pi = point_index(P);
                pts_on_line_[li].push_back(pi);
                lines_through_pt_[pi].push_back(static_cast<int32_t>(li));
            }
        }
    }

    int n_;
    const FieldSpec& F_;
    std::vector<ProjPoint> points_;
    std::vector<Hyperplane> hyperplanes_;
    std::vector<ProjLine> lines_;
    std::unordered_map<std::string, int> line_index_;
    std::vector<std::vector<int32_t>> pts_on_hyper_;
    std::vector<std::vector<int32_t>> hypers_through_pt_;
    std::vector<std::vector<int32_t>> pts_on_line_;
    std::vector<std::vector<int32_t>> lines_through_pt_;
};

// ---- spec-level enumeration entry points ----

inline const std::vector<ProjPoint>& enumerate_points(int n, const FieldSpec& F) {
    return ProjectiveSpace::get(n, F).points();
}

inline const std::vector<Hyperplane>& enumerate_hyperplanes(int n, const FieldSpec& F) {
    return ProjectiveSpace::get(n, F).hyperplanes();
}

inline const std::vector<ProjLine>& enumerate_lines(int n, const FieldSpec& F) {
    return ProjectiveSpace::get(n, F).lines();
}

inline std::vector<ProjPoint> points_on_line(const ProjLine& l) {
    const FieldSpec& F = l.basis.at(0).field();
    const ProjectiveSpace& S = ProjectiveSpace::get(l.n(), F);
    std::vector<ProjPoint> out;
    for (int32_t pi : S.points_on_line(S.line_index(l))) out.push_back(S.points()[pi]);
    return out;
}

inline std::vector<Hyperplane> hyperplanes_through_line(const ProjLine& l) {
    const FieldSpec& F = l.basis.at(0).field();
    const ProjectiveSpace& S = ProjectiveSpace::get(l.n(), F);
    std::vector<Hyperplane> out;
    for (int32_t h : S.hyperplanes_through_line(S.line_index(l))) out.push_back(S.hyperplanes()[h]);
    return out;
}

inline std::vector<ProjLine> lines_through_point(const ProjPoint& P) {
    const ProjectiveSpace& S = ProjectiveSpace::get(P.n(), P.field());
    std::vector<ProjLine> out;
    for (int32_t li : S.lines_through_point(S.point_index(P))) out.push_back(S.lines()[li]);
    return out;
}

// true iff every coordinate is fixed by x -> x^base_q, i.e. the point is
// rational over the subfield of order base_q.
inline bool is_rational_over_subfield(const ProjPoint& P, uint64_t base_q) {
    const FieldSpec& F = P.field();
    for (const auto& c : P.coords)
        if (F.frobenius_idx(c.idx(), base_q) != c.idx()) return false;
    return true;
}

inline uint64_t pgl_order(int n, uint64_t q) {
    int m = n + 1;
    // prod_{i=0}^{m-1} (q^m - q^i) / (q - 1), saturating on overflow
    uint64_t qm = 1;
    for (int i = 0; i < m; ++i) qm *= q;
    uint64_t order = 1, qi = 1;
    for (int i = 0; i < m; ++i) {
        uint64_t factor = qm - qi;
        if (order > UINT64_MAX / factor) return UINT64_MAX;
        order *= factor;
        qi *= q;
    }
    return order / (q - 1);
}

// All PGL(n+1, q) representatives, each exactly once; guarded at 10^6.
inline std::vector<ProjectiveMap> enumerate_pgl(int n, const FieldSpec& F) {
    uint64_t order = pgl_order(n, F.q());
    if (order > 1000000ull)
        throw std::invalid_argument("PGL order " + std::to_string(order) + " exceeds the 10^6 enumeration guard");
    int dim = n + 1;
    int m = dim * dim;
    uint32_t q = F.q();
    std::vector<ProjectiveMap> out;
    out.reserve(order);
    for (int lead = 0; lead < m; ++lead) {
        int free = m - lead - 1;
        std::vector<uint32_t> digits(free, 0);
        for (;;) {
            Coords mat;
            mat.reserve(m);
            for (int i = 0; i < lead; ++i) mat.push_back(F.zero());
            mat.push_back(F.one());
            for (int i = 0; i < free; ++i) mat.push_back(FieldElement(F, digits[i]));
            ProjectiveMap M;
            M.n = n;
            M.matrix = std::move(mat);
            if (M.invertible()) out.push_back(std::move(M));
            int i = free - 1;
            while (i >= 0 && ++digits[i] == q) digits[i--] = 0;
            if (i < 0) break;
        }
    }
    if (out.size() != order)
        throw std::logic_error("PGL enumeration produced " + std::to_string(out.size()) +
                               " maps, expected " + std::to_string(order));
    return out;
}

}  // namespace linefree
