#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <unordered_set>

#include "linefree/bounds.hpp"
#include "linefree/projgeom.hpp"

using namespace linefree;

namespace {
std::string pack_map(const ProjectiveMap& M) { return detail::pack_key(M.idx_vector()); }
}  // namespace

TEST_CASE("point and hyperplane counts") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const FieldSpec& F2 = FieldSpec::get(2, 1);
    CHECK(enumerate_points(2, F4).size() == 21);
    CHECK(enumerate_points(3, F4).size() == 85);
    CHECK(enumerate_points(1, F2).size() == 3);
    CHECK(enumerate_hyperplanes(3, F4).size() == 85);
    CHECK(enumerate_hyperplanes(2, F2).size() == 7);
}

TEST_CASE("theta counts for all small spaces") {
    for (uint32_t q : {2, 3, 4, 5}) {
        const FieldSpec& F = FieldSpec::get_by_order(q);
        for (int n = 1; n <= 3; ++n)
            CHECK(static_cast<long long>(enumerate_points(n, F).size()) == theta(q, n).as_integer());
    }
}

TEST_CASE("line counts") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const FieldSpec& F2 = FieldSpec::get(2, 1);
    CHECK(enumerate_lines(2, F4).size() == 21);
    CHECK(enumerate_lines(3, F4).size() == 357);  // (q^2+1)(q^2+q+1)
    CHECK(enumerate_lines(3, F2).size() == 35);
    CHECK(enumerate_lines(1, F2).size() == 1);  // the whole space
}

TEST_CASE("normalization and indexing") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const ProjectiveSpace& S = ProjectiveSpace::get(2, F4);
    FieldElement w = F4.gen();
    // (w : w^2 : 1) normalizes to (1 : w : w^2)
    ProjPoint P(Coords{w, w * w, F4.one()});
    CHECK(P.coords[0] == F4.one());
    CHECK(P.coords[1] == w);
    CHECK(P.coords[2] == w * w);
    ProjPoint P2(P.coords);  // idempotent
    CHECK(P == P2);
    CHECK_THROWS_AS(ProjPoint(Coords{F4.zero(), F4.zero(), F4.zero()}), std::invalid_argument);
    for (size_t i = 0; i < S.points().size(); ++i)
        CHECK(S.point_index(S.points()[i]) == static_cast<int>(i));
}

TEST_CASE("incidence: points per hyperplane and duality") {
    for (uint32_t q : {2, 3, 4}) {
        const FieldSpec& F = FieldSpec::get_by_order(q);
        for (int n = 2; n <= 3; ++n) {
            const ProjectiveSpace& S = ProjectiveSpace::get(n, F);
            long long tn1 = theta(q, n - 1).as_integer();
            long long tn2 = theta(q, n - 2).as_integer();
            long long total = 0;
            for (size_t h = 0; h < S.hyperplanes().size(); ++h) {
                CHECK(static_cast<long long>(S.points_on_hyperplane(h).size()) == tn1);
                total += static_cast<long long>(S.points_on_hyperplane(h).size());
            }
            // double count sum_H |H| = theta(n) * theta(n-1)
            CHECK(total == theta(q, n).as_integer() * tn1);
            for (size_t p = 0; p < S.points().size(); ++p)
                CHECK(static_cast<long long>(S.hyperplanes_through_point(p).size()) == tn1);
            (void)tn2;
        }
    }
}

TEST_CASE("points on a line and planes through it") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const auto& lines = enumerate_lines(3, F4);
    const ProjLine& l = lines[123];
    auto pts = points_on_line(l);
    auto planes = hyperplanes_through_line(l);
    CHECK(pts.size() == 5);
    CHECK(planes.size() == 5);
    for (const auto& H : planes)
        for (const auto& P : pts) CHECK(H.contains(P));

    const FieldSpec& F2 = FieldSpec::get(2, 1);
    CHECK(points_on_line(enumerate_lines(2, F2)[0]).size() == 3);

    SECTION("in the plane, the only hyperplane through a line is the line itself") {
        const auto& l2 = enumerate_lines(2, F4)[5];
        auto hs = hyperplanes_through_line(l2);
        REQUIRE(hs.size() == 1);  // theta_q(0)
        for (const auto& P : points_on_line(l2)) CHECK(hs[0].contains(P));
    }
}

TEST_CASE("lines through a point") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const ProjectiveSpace& S3 = ProjectiveSpace::get(3, F4);
    const ProjectiveSpace& S2 = ProjectiveSpace::get(2, F4);
    CHECK(S3.lines_through_point(0).size() == 21);  // theta_4(2)
    CHECK(S2.lines_through_point(7).size() == 5);   // theta_4(1)
    SECTION("the lines through P partition the other points") {
        const ProjPoint& P = S3.points()[42];
        std::set<int> seen;
        for (const ProjLine& l : lines_through_point(P)) {
            bool has_p = false;
            for (const auto& Q : points_on_line(l)) {
                int qi = S3.point_index(Q);
                if (Q == P) { has_p = true; continue; }
                CHECK(seen.insert(qi).second);  // no point on two lines through P
            }
            CHECK(has_p);
        }
        CHECK(seen.size() == S3.points().size() - 1);
    }
}

TEST_CASE("line_through canonicalization") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const ProjectiveSpace& S = ProjectiveSpace::get(3, F4);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int a = static_cast<int>(rng() % S.points().size());
        int b = static_cast<int>(rng() % S.points().size());
        if (a == b) continue;
        ProjLine l = line_through(S.points()[a], S.points()[b]);
        int li = S.line_index(l);
        // any two distinct points on l regenerate the same canonical line
        auto pts = S.points_on_line(li);
        ProjLine l2 = line_through(S.points()[pts[3]], S.points()[pts[1]]);
        CHECK(l2 == l);
    }
    CHECK_THROWS_AS(line_through(S.points()[5], S.points()[5]), std::invalid_argument);
}

TEST_CASE("two distinct hyperplanes of P^3 meet in a line") {
    const FieldSpec& F2 = FieldSpec::get(2, 1);
    const ProjectiveSpace& S = ProjectiveSpace::get(3, F2);
    for (size_t h1 = 0; h1 < 5; ++h1) {
        for (size_t h2 = h1 + 1; h2 < S.hyperplanes().size(); ++h2) {
            std::vector<ProjPoint> common;
            for (int32_t p : S.points_on_hyperplane(h1))
                if (S.hyperplanes()[h2].contains(S.points()[p])) common.push_back(S.points()[p]);
            REQUIRE(common.size() == 3);  // q + 1
            ProjLine l = line_through(common[0], common[1]);
            for (const auto& P : common) {
                bool found = false;
                for (const auto& Q : points_on_line(l)) found |= Q == P;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("PGL enumeration") {
    const FieldSpec& F2 = FieldSpec::get(2, 1);
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    auto pgl22 = enumerate_pgl(1, F2);
    CHECK(pgl22.size() == 6);  // PGL(2,2) ~ S_3
    auto pgl34 = enumerate_pgl(2, F4);
    CHECK(pgl34.size() == 60480);

    SECTION("identity present, all distinct") {
        std::unordered_set<std::string> keys;
        for (const auto& M : pgl34) keys.insert(pack_map(M));
        CHECK(keys.size() == pgl34.size());
        CHECK(keys.count(pack_map(ProjectiveMap::identity(2, F4))) == 1);
    }

    SECTION("closure under composition, sampled") {
        std::unordered_set<std::string> keys;
        for (const auto& M : pgl34) keys.insert(pack_map(M));
        std::mt19937_64 rng(2024);
        for (int i = 0; i < 1000; ++i) {
            const auto& A = pgl34[rng() % pgl34.size()];
            const auto& B = pgl34[rng() % pgl34.size()];
            CHECK(keys.count(pack_map(A.compose(B))) == 1);
        }
    }

    SECTION("maps permute the points") {
        const ProjectiveSpace& S = ProjectiveSpace::get(2, F4);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 20; ++i) {
            const auto& M = pgl34[rng() % pgl34.size()];
            std::set<int> image;
            for (const auto& P : S.points()) image.insert(S.point_index(M.apply(P)));
            CHECK(image.size() == S.points().size());
        }
    }

    SECTION("inverse composes to the identity") {
        std::mt19937_64 rng(6);
        ProjectiveMap id = ProjectiveMap::identity(2, F4);
        for (int i = 0; i < 50; ++i) {
            const auto& M = pgl34[rng() % pgl34.size()];
            CHECK(M.compose(M.inverse()) == id);
        }
    }

    SECTION("guard rejects huge groups") {
        CHECK_THROWS_AS(enumerate_pgl(3, FieldSpec::get(3, 1)), std::invalid_argument);
    }
}

TEST_CASE("subfield rationality") {
    const FieldSpec& F4 = FieldSpec::get(2, 2);
    const ProjectiveSpace& S = ProjectiveSpace::get(2, F4);
    int rational = 0;
    for (const auto& P : S.points())
        if (is_rational_over_subfield(P, 2)) ++rational;
    CHECK(rational == 7);  // theta_2(2)
}
