#include <catch2/catch_amalgamated.hpp>

#include "linefree/bounds.hpp"

using namespace linefree;

TEST_CASE("theta values") {
    CHECK(theta(4, 2).as_integer() == 21);
    CHECK(theta(4, 3).as_integer() == 85);
    CHECK(theta(2, 1).as_integer() == 3);
    for (uint64_t q = 2; q <= 16; ++q) {
        CHECK(theta(q, -1) == BoundValue(0));
        CHECK(theta(q, 0) == BoundValue(1));
        CHECK(theta(q, -2) == BoundValue(-1, static_cast<long long>(q)));
    }
    CHECK(theta(4, -2).to_string() == "-1/4");
    CHECK_THROWS_AS(theta(1, 2), std::invalid_argument);
}

TEST_CASE("theta recurrence theta(q,s) = q^s + theta(q,s-1)") {
    for (uint64_t q = 2; q <= 16; ++q) {
        for (int s = -3; s <= 10; ++s) {
            BoundValue qs = s >= 0 ? BoundValue(detail::ipow(static_cast<long long>(q), s))
                                   : BoundValue(1, detail::ipow(static_cast<long long>(q), -s));
            CHECK(theta(q, s) == qs + theta(q, s - 1));
        }
    }
}

TEST_CASE("BoundValue integer accessor and floor") {
    CHECK(BoundValue(6, 3).as_integer() == 2);
    CHECK_THROWS_AS(BoundValue(1, 3).as_integer(), std::domain_error);
    CHECK(BoundValue(7, 2).floor() == 3);
    CHECK(BoundValue(-1, 3).floor() == -1);  // toward -infinity
    CHECK(BoundValue(-6, 3).floor() == -2);
}

TEST_CASE("plane-curve bound") {
    CHECK(sziklai_bound(4, 4) == 13);
    CHECK(sziklai_bound(2, 5) == 6);
    CHECK(sziklai_bound(1, 9) == 1);
    CHECK_THROWS_AS(sziklai_bound(0, 4), std::invalid_argument);
}

TEST_CASE("hypersurface bound") {
    CHECK(main_bound(3, 4, 4) == 51);
    CHECK(main_bound(3, 4, 5) == 78);
    CHECK(main_bound(4, 3, 2) == 20);
    SECTION("n = 2 agrees with the plane bound") {
        for (long long d = 2; d <= 16; ++d)
            for (uint64_t q = 2; q <= 16; ++q) CHECK(main_bound(2, d, q) == sziklai_bound(d, q));
    }
    SECTION("n = 3, d = 2 is q^2 + 1") {
        for (uint64_t q = 2; q <= 16; ++q)
            CHECK(main_bound(3, 2, q) == static_cast<long long>(q * q + 1));
    }
    SECTION("strictly increasing in d") {
        for (int n = 2; n <= 5; ++n)
            for (uint64_t q : {2, 3, 4, 5, 9, 16})
                for (long long d = 2; d < 16; ++d)
                    CHECK(main_bound(n, d, q) < main_bound(n, d + 1, q));
    }
    CHECK_THROWS_AS(main_bound(1, 3, 4), std::invalid_argument);
}

TEST_CASE("subset-section bound") {
    CHECK(subset_section_bound(14, 3, 4) == 55);  // 13*4 + 1 + floor(13/5)
    CHECK(subset_section_bound(1, 2, 2) == 1);
    CHECK(subset_section_bound(16, 3, 5) == 78);  // 15*5 + 1 + floor(15/6)
    CHECK_THROWS_AS(subset_section_bound(0, 3, 4), std::invalid_argument);
}

TEST_CASE("induction arithmetic") {
    CHECK(induction_step_check(3, 4, 5));
    CHECK(induction_step_check(4, 3, 4));
    SECTION("full grid") {
        for (int n = 3; n <= 6; ++n)
            for (uint64_t q : {2, 3, 4, 5, 7, 8, 9})
                for (long long d = 2; d <= static_cast<long long>(q) + 1; ++d)
                    CHECK(induction_step_check(n, d, q));
    }
    CHECK_THROWS_AS(induction_step_check(2, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(induction_step_check(3, 7, 4), std::invalid_argument);  // d > q+1
}
