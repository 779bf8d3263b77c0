// acceptance — the verification gate as a single binary. Each criterion
// prints exactly one PASS/FAIL line; the exit code is nonzero if any fails.
//
// Criteria 1-7 are exact identities and desk-scale exhaustive checks;
// 8-11 are property-based falsification suites over seeded random samples;
// 12 runs the census kernel-agreement proxy (the full 3.58e8 census is the
// opt-in `linefree scan --exhaustive` flow, see README).

#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "linefree/linefree.hpp"

using namespace linefree;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion-%02d %s%s%s\n", pass ? "PASS" : "FAIL", num, name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void from_check(int num, const CheckResult& c) { report(num, c.name, c.pass, c.detail); }

const FieldSpec& F4() { return FieldSpec::get(2, 2); }

HomogeneousForm random_quartic_surface(std::mt19937_64& rng) {
    const MonomialBasis& B = MonomialBasis::get(4, 4);
    std::vector<uint32_t> c(B.size());
    bool nz = false;
    while (!nz)
        for (auto& x : c) {
            x = static_cast<uint32_t>(rng() % 4);
            nz |= x != 0;
        }
    return HomogeneousForm::from_coeff_vector(F4(), 4, 4, c);
}

// criterion 8 and 9: the tangent-count table over >= 100 filtered surfaces
void criteria_8_9() {
    // section-size cap per t(H); t = 5 forces equality with 5
    const int64_t limits[6] = {14, 11, 10, 8, 6, 5};
    std::mt19937_64 rng(20260811);
    int accepted = 0, trials = 0, t5_planes = 0;
    bool pass8 = true, pass9 = true;
    std::string det8, det9;

    auto check_surface = [&](const HomogeneousForm& f, bool require_t5_plane) {
        SurfaceProfile prof = profile(f);
        if (prof.max_t > 5) {
            pass8 = false;
            det8 = "t(H) = " + std::to_string(prof.max_t) + " > 5";
            return;
        }
        const ProjectiveSpace& S = space_of(f);
        bool saw_t5 = false;
        for (size_t h = 0; h < prof.per_hyperplane.size(); ++h) {
            auto [sec, t] = prof.per_hyperplane[h];
            if (t == 5 ? sec != 5 : sec > limits[t]) {
                pass8 = false;
                det8 = "t=" + std::to_string(t) + " section " + std::to_string(sec);
                return;
            }
            if (t == 5) {
                saw_t5 = true;
                ++t5_planes;
                auto r = restrict_to_hyperplane(f, S.hyperplanes()[h]);
                if (!r) {
                    pass8 = false;
                    det8 = "t=5 plane is a component";
                    return;
                }
                auto root = is_perfect_square(*r);
                if (!root || !conic_is_absolutely_irreducible(*root)) {
                    pass8 = false;
                    det8 = "t=5 section is not an irreducible double conic";
                    return;
                }
            }
        }
        if (require_t5_plane && !saw_t5) {
            pass8 = false;
            det8 = "constructed double-conic surface has no t=5 plane";
        }
        // criterion 9: double-count identities, exact
        int64_t sec_sum = 0, jnj = 0;
        for (const auto& [sec, t] : prof.per_hyperplane) {
            sec_sum += sec;
            jnj += t;
        }
        if (sec_sum != 21 * prof.N || jnj != prof.N) {
            pass9 = false;
            det9 = "sum sections " + std::to_string(sec_sum) + " vs 21N = " +
                   std::to_string(21 * prof.N) + "; sum t " + std::to_string(jnj);
        }
    };

    while (accepted < 100 && pass8 && pass9) {
        ++trials;
        auto f = random_quartic_surface(rng);
        if (!singular_points_fq(f).empty()) continue;  // the table needs smooth F_4-points
        if (!is_line_free(f)) continue;                // and line-free sections
        check_surface(f, false);
        ++accepted;
    }

    // constructed double-conic sections exercise the t(H) = 5 row
    const auto dconic = parse_form("(x0*x1 + x2^2)^2", F4(), 4);
    int constructed = 0;
    while (constructed < 5 && pass8 && pass9) {
        const MonomialBasis& B3 = MonomialBasis::get(4, 3);
        std::vector<uint32_t> cc(B3.size());
        bool nz = false;
        for (auto& x : cc) {
            x = static_cast<uint32_t>(rng() % 4);
            nz |= x != 0;
        }
        if (!nz) continue;
        auto cubic = HomogeneousForm::from_coeff_vector(F4(), 4, 3, cc);
        detail::SparsePoly x3 = detail::SparsePoly::variable(F4(), 4, 3);
        auto f = HomogeneousForm(F4(), 4, dconic.to_poly() + x3 * cubic.to_poly());
        if (!singular_points_fq(f).empty() || !is_line_free(f)) continue;
        check_surface(f, true);
        ++constructed;
    }

    report(8, "tangent-table-sweep", pass8,
           pass8 ? std::to_string(accepted) + " random + " + std::to_string(constructed) +
                       " double-conic surfaces, " + std::to_string(t5_planes) + " t=5 planes"
                 : det8);
    report(9, "double-count-identities", pass9,
           pass9 ? "sum sections = 21N and sum t = N on all profiled surfaces" : det9);
}

void criterion_10() {
    std::mt19937_64 rng(424242);
    int accepted = 0, trials = 0;
    bool pass = true;
    std::string det;
    while (accepted < 50 && trials < 20000) {
        ++trials;
        auto f = random_quartic_surface(rng);
        if (singular_points_fq(f).empty()) continue;  // need an F_4-singular point
        if (!is_line_free(f)) continue;               // the surface filter
        if (!singular_case_bound_check(f)) {
            pass = false;
            det = "N = " + std::to_string(count_points(f)) + " > 43";
            break;
        }
        ++accepted;
    }
    if (pass && accepted < 50) {
        pass = false;
        det = "sampler starved: only " + std::to_string(accepted) + " surfaces";
    }
    report(10, "singular-point-bound", pass,
           pass ? std::to_string(accepted) + " singular line-free surfaces, all N <= 43" : det);
}

void criterion_11() {
    bool pass = true;
    std::string det;
    uint64_t total_samples = 0, total_line_free = 0;
    auto sweep = [&](int n, int d, uint64_t q, uint64_t samples) {
        if (!pass) return;
        const FieldSpec& F = FieldSpec::get_by_order(q);
        ScanTask t;
        t.n = n;
        t.d = d;
        t.p = F.p();
        t.e = F.e();
        t.mode = ScanMode::Random;
        t.seed = 20260811;
        t.sample_count = samples;
        ScanOptions opts;
        opts.threads = 2;
        ScanSummary s = run_scan(t, opts);
        total_samples += s.counts.total;
        total_line_free += s.counts.line_free;
        if (s.counts.exceeds_unflagged != 0) {
            pass = false;
            det = "unflagged EXCEEDS at n=" + std::to_string(n) + " d=" + std::to_string(d) +
                  " q=" + std::to_string(q);
        }
    };
    for (uint64_t q : {2, 3, 4})
        for (int d : {3, 4}) sweep(3, d, q, 100000);
    for (int d : {2, 3}) sweep(4, d, 2, 10000);
    report(11, "falsification-sweep", pass,
           pass ? std::to_string(total_samples) + " samples, " + std::to_string(total_line_free) +
                      " line-free, zero unflagged EXCEEDS"
                : det);
}

void criterion_12() {
    const F4PlaneQuarticKernel& kern = F4PlaneQuarticKernel::get();
    const SearchSpace& ref = SearchSpace::get(2, 4, F4());
    std::mt19937_64 rng(31337);
    std::vector<uint32_t> c(15);
    uint64_t domain = normalized_vector_count(15, 4);
    bool pass = true;
    std::string det;
    for (uint64_t i = 0; i < 1000000 && pass; ++i) {
        uint64_t idx = rng() % domain;
        decode_normalized(idx, 15, 4, c);
        uint32_t zm = kern.zero_mask(c);
        if (F4PlaneQuarticKernel::count(zm) != ref.count(c) ||
            kern.line_free(zm) != ref.line_free(c)) {
            pass = false;
            det = "kernel disagreement at index " + std::to_string(idx);
        }
    }
    report(12, "census-kernel-agreement", pass,
           pass ? "bit-sliced and scalar kernels agree on 10^6 candidates (full census is opt-in)"
                : det);
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();

    from_check(1, verify::theta_identities());
    from_check(2, verify::bound_agreement_n2());
    from_check(3, verify::induction_grid());

    {
        CheckResult a = verify::subset_oracle(2, 2);
        CheckResult b = verify::subset_oracle(3, 2);
        CheckResult c = verify::subset_oracle(2, 3);
        report(4, "subset-bound-oracle", a.pass && b.pass && c.pass,
               a.detail + " / " + b.detail + " / " + c.detail);
    }

    {
        CheckResult a = verify::k_point_count();
        CheckResult b = verify::k_points_complement();
        CheckResult c = verify::k_lines_meet();
        CheckResult d = verify::k_line_free();
        report(5, "exceptional-quartic-facts", a.pass && b.pass && c.pass && d.pass,
               a.pass && b.pass && c.pass && d.pass
                   ? "N=14; complement of the F_2-plane; meets all 21 lines; line-free"
                   : a.detail + " / " + b.detail + " / " + c.detail + " / " + d.detail);
    }

    from_check(6, verify::elliptic_quadric_extremality());
    from_check(7, verify::theorem_51_constants());

    criteria_8_9();
    criterion_10();
    criterion_11();
    criterion_12();

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s — %d/12 criteria passed in %.1fs\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                12 - g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
