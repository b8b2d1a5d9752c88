#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "refrule/policy.hpp"
#include "refrule/rng.hpp"

using namespace refrule;

TEST_SUITE_BEGIN("policies");

TEST_CASE("convex combination sweeps the interval") {
    Interval iv{2.0, 6.0};
    CHECK(apply(Policy{ConvexCombination{0.0}}, 0.0, iv) == 2.0);
    CHECK(apply(Policy{ConvexCombination{1.0}}, 0.0, iv) == 6.0);
    CHECK(apply(midpoint_rule(), 123.0, iv) == 4.0);
    CHECK_FALSE(target_of(midpoint_rule(), 0.3).has_value());
}

TEST_CASE("anchor projects its fixed target") {
    Policy p{Anchor{0.5}};
    CHECK(apply(p, 9.0, Interval{0.0, 1.0}) == 0.5);
    CHECK(apply(p, 9.0, Interval{0.6, 1.0}) == 0.6);
    CHECK(apply(p, 9.0, Interval{-1.0, 0.2}) == 0.2);
    CHECK(target_of(p, 9.0) == 0.5);
}

TEST_CASE("status quo projects the previous action") {
    Policy p{StatusQuo{}};
    CHECK(apply(p, 0.5, Interval{0.0, 1.0}) == 0.5);
    CHECK(apply(p, -2.0, Interval{0.0, 1.0}) == 0.0);
    CHECK(target_of(p, -2.0) == -2.0);
}

TEST_CASE("tabulated references interpolate and clamp") {
    TabulatedReference t;
    t.grid = {0.0, 1.0, 2.0};
    t.targets = {0.0, 0.5, 0.8};
    CHECK(t.interp(0.0) == 0.0);
    CHECK(t.interp(1.0) == 0.5);
    CHECK(t.interp(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(t.interp(1.5) == doctest::Approx(0.65).epsilon(1e-15));
    CHECK(t.interp(-3.0) == 0.0);   // clamped below
    CHECK(t.interp(10.0) == 0.8);   // clamped above
    CHECK(target_of(Policy{t}, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("policy validation") {
    CHECK_THROWS_AS(validate(Policy{ConvexCombination{1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Policy{ConvexCombination{-0.1}}), std::invalid_argument);
    TabulatedReference one_point;
    one_point.grid = {0.0};
    one_point.targets = {0.0};
    CHECK_THROWS_AS(validate(Policy{one_point}), std::invalid_argument);
    TabulatedReference unsorted;
    unsorted.grid = {0.0, 0.0, 1.0};
    unsorted.targets = {0.0, 0.1, 0.2};
    CHECK_THROWS_AS(validate(Policy{unsorted}), std::invalid_argument);
    TabulatedReference bad_value;
    bad_value.grid = {0.0, 1.0};
    bad_value.targets = {0.0, std::nan("")};
    CHECK_THROWS_AS(validate(Policy{bad_value}), std::invalid_argument);
    CHECK_NOTHROW(validate(Policy{Anchor{-3.0}}));
}

TEST_CASE("applied actions always stay feasible") {
    Rng rng(21);
    Policy rules[] = {midpoint_rule(), Policy{Anchor{0.3}}, Policy{StatusQuo{}},
                      Policy{ConvexCombination{0.9}}};
    for (const auto& p : rules) {
        double prev = 0.0;
        for (int i = 0; i < 2000; ++i) {
            double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
            Interval iv{std::min(a, b), std::max(a, b)};
            double act = apply(p, prev, iv);
            CHECK(act >= iv.lo);
            CHECK(act <= iv.hi);
            prev = act;
        }
    }
}

TEST_CASE("gentle tables pass the damping gate") {
    TabulatedReference t;
    for (int i = 0; i <= 8; ++i) {
        double s = -1.0 + 0.25 * i;
        t.grid.push_back(s);
        t.targets.push_back(0.9 * s);
    }
    NonexpansiveReport rep = check_nonexpansive(t);
    CHECK(rep.ok());
    CHECK(rep.max_slope == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("steep tables are flagged as expansive") {
    TabulatedReference t;
    t.grid = {0.0, 1.0, 2.0};
    t.targets = {0.0, 1.5, 1.6};
    NonexpansiveReport rep = check_nonexpansive(t);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.nonexpansive_ok);
    CHECK(rep.max_slope == doctest::Approx(1.5).epsilon(1e-9));
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("decreasing tables are flagged as non-monotone") {
    TabulatedReference t;
    t.grid = {0.0, 1.0};
    t.targets = {0.5, 0.2};
    NonexpansiveReport rep = check_nonexpansive(t);
    CHECK_FALSE(rep.monotone_ok);
}

TEST_SUITE_END();
