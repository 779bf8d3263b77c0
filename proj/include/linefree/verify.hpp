// verify.hpp — the bundled verification suite behind `linefree verify-paper`:
// exact identities of theta, agreement of the n=2 bound with the plane
// bound, the induction arithmetic grid, the exhaustive subset-bound oracle,
// the facts about the exceptional 14-point quartic, elliptic-quadric
// extremality, and the constants of the 51-point theorem.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "linefree/analysis.hpp"
#include "linefree/bounds.hpp"

namespace linefree {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace verify {

inline CheckResult theta_identities() {
    CheckResult r{"theta-identities", true, "q in 2..16, s in -3..10"};
    for (uint64_t q = 2; q <= 16; ++q) {
        for (int s = -3; s <= 10; ++s) {
            BoundValue lhs = theta(q, s);
            BoundValue qs = (s >= 0)
                ? BoundValue(detail::ipow(static_cast<long long>(q), static_cast<unsigned>(s)))
                : BoundValue(1, detail::ipow(static_cast<long long>(q), static_cast<unsigned>(-s)));
            if (lhs != qs + theta(q, s - 1)) {
                r.pass = false;
                r.detail = "identity fails at q=" + std::to_string(q) + " s=" + std::to_string(s);
                return r;
            }
        }
        if (theta(q, -1) != BoundValue(0) || theta(q, 0) != BoundValue(1) ||
            theta(q, -2) != BoundValue(-1, static_cast<long long>(q))) {
            r.pass = false;
            r.detail = "special values fail at q=" + std::to_string(q);
            return r;
        }
    }
    return r;
}

inline CheckResult bound_agreement_n2() {
    CheckResult r{"bound-agreement-n2", true, "main_bound(2,d,q) == (d-1)q+1 for 2 <= d,q <= 16"};
    for (long long d = 2; d <= 16; ++d)
        for (uint64_t q = 2; q <= 16; ++q)
            if (main_bound(2, d, q) != sziklai_bound(d, q)) {
                r.pass = false;
                r.detail = "disagree at d=" + std::to_string(d) + " q=" + std::to_string(q);
                return r;
            }
    return r;
}

inline CheckResult induction_grid() {
    CheckResult r{"induction-grid", true, "n in 3..6, q in {2,3,4,5,7,8,9}, 2 <= d <= q+1"};
    for (int n = 3; n <= 6; ++n)
        for (uint64_t q : {2, 3, 4, 5, 7, 8, 9})
            for (long long d = 2; d <= static_cast<long long>(q) + 1; ++d)
                if (!induction_step_check(n, d, q)) {
                    r.pass = false;
                    r.detail = "chain breaks at n=" + std::to_string(n) + " d=" + std::to_string(d) +
                               " q=" + std::to_string(q);
                    return r;
                }
    return r;
}

inline CheckResult subset_oracle(int n, uint32_t q) {
    const FieldSpec& F = FieldSpec::get_by_order(q);
    CheckResult r;
    r.name = "subset-oracle-P" + std::to_string(n) + "F" + std::to_string(q);
    OracleResult res = oracle_subset_bound(n, F);
    r.pass = res.ok;
    r.detail = std::to_string(res.subsets_checked) + " subsets";
    return r;
}

inline CheckResult k_point_count() {
    int64_t N = count_points(k_quartic());
    return {"k-point-count", N == 14, "N = " + std::to_string(N)};
}

inline CheckResult k_points_complement() {
    // zero set of K == P^2(F_4) \ P^2(F_2)
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const ProjectiveSpace& S = ProjectiveSpace::get(2, F4);
    std::set<int32_t> zeros;
    for (int32_t p : zero_set(k_quartic())) zeros.insert(p);
    CheckResult r{"k-points-complement", true, "K(F_4) = P^2(F_4) \\ P^2(F_2)"};
    for (size_t p = 0; p < S.points().size(); ++p) {
        bool sub = is_rational_over_subfield(S.points()[p], 2);
        bool on_k = zeros.count(static_cast<int32_t>(p)) > 0;
        if (sub == on_k) {  // must be on K exactly when NOT F_2-rational
            r.pass = false;
            r.detail = "mismatch at point index " + std::to_string(p);
            return r;
        }
    }
    return r;
}

inline CheckResult k_lines_meet() {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const auto& lines = enumerate_lines(2, F4);
    CheckResult r{"k-lines-meet", true, std::to_string(lines.size()) + " lines each meet K"};
    for (const auto& l : lines) {
        BinaryForm b = restrict_to_line(k_quartic(), l);
        if (b.is_zero() || b.count_projective_roots() == 0) {
            r.pass = false;
            r.detail = "a line misses K";
            return r;
        }
    }
    return r;
}

inline CheckResult k_line_free() {
    bool lf = lines_on(k_quartic()).empty();
    return {"k-line-free", lf, lf ? "no F_4-line components" : "K contains a line"};
}

inline CheckResult elliptic_quadric_extremality() {
    CheckResult r{"elliptic-quadric-extremality", true, "N = q^2+1 = bound, line-free, q in {2,3,4,5,7,8,9}"};
    for (uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
        const FieldSpec& F = FieldSpec::get_by_order(q);
        HomogeneousForm Q = elliptic_quadric(F);
        int64_t N = count_points(Q);
        long long bound = main_bound(3, 2, q);
        bool lf = is_line_free(Q);
        if (!lf || N != static_cast<int64_t>(q * q + 1) || N != bound) {
            r.pass = false;
            r.detail = "q=" + std::to_string(q) + ": N=" + std::to_string(N) +
                       " bound=" + std::to_string(bound) + " line_free=" + std::to_string(lf);
            return r;
        }
    }
    return r;
}

inline CheckResult theorem_51_constants() {
    // N(theta_4(2)+2) <= 14 theta_4(3) + 1 = 1191, hence N <= floor(1191/23) = 51
    long long t2 = theta(4, 2).as_integer();
    long long t3 = theta(4, 3).as_integer();
    long long cap = 14 * t3 + 1;
    long long denom = t2 + 2;
    bool ok = (t2 == 21) && (t3 == 85) && (cap == 1191) && (denom == 23) &&
              (cap / denom == 51) && (cap % denom == 18) && (main_bound(3, 4, 4) == 51);
    return {"theorem-51-constants", ok,
            "14*theta_4(3)+1 = " + std::to_string(cap) + ", floor(" + std::to_string(cap) + "/" +
                std::to_string(denom) + ") = " + std::to_string(cap / denom)};
}

}  // namespace verify

inline std::vector<CheckResult> verify_paper_checks() {
    std::vector<CheckResult> out;
    out.push_back(verify::theta_identities());
    out.push_back(verify::bound_agreement_n2());
    out.push_back(verify::induction_grid());
    out.push_back(verify::subset_oracle(2, 2));
    out.push_back(verify::subset_oracle(3, 2));
    out.push_back(verify::subset_oracle(2, 3));
    out.push_back(verify::k_point_count());
    out.push_back(verify::k_points_complement());
    out.push_back(verify::k_lines_meet());
    out.push_back(verify::k_line_free());
    out.push_back(verify::elliptic_quadric_extremality());
    out.push_back(verify::theorem_51_constants());
    return out;
}

}  // namespace linefree
