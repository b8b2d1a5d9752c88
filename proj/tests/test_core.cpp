#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "refrule/distributions.hpp"
#include "refrule/interval.hpp"
#include "refrule/parallel.hpp"
#include "refrule/rng.hpp"
#include "refrule/summation.hpp"

using namespace refrule;

TEST_SUITE_BEGIN("core");

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a = Rng::stream(42, 0);
    Rng b = Rng::stream(42, 0);
    Rng c = Rng::stream(42, 1);
    bool all_equal = true;
    bool any_equal_to_c = false;
    for (int i = 0; i < 100; ++i) {
        double xa = a.uniform01(), xb = b.uniform01(), xc = c.uniform01();
        all_equal = all_equal && xa == xb;
        any_equal_to_c = any_equal_to_c || xa == xc;
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_to_c);
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        double x = rng.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("uniform(a,b) respects its range") {
    Rng rng(8);
    for (int i = 0; i < 10000; ++i) {
        double x = rng.uniform(-2.0, 3.0);
        CHECK(x >= -2.0);
        CHECK(x < 3.0);
    }
}

TEST_CASE("normal draws have the right first two moments") {
    Rng rng(9);
    long n = 200000;
    KahanSum sum, sumsq;
    for (long i = 0; i < n; ++i) {
        double x = rng.normal(0.0, 1.0);
        sum.add(x);
        sumsq.add(x * x);
    }
    double mean = sum.value() / static_cast<double>(n);
    double var = sumsq.value() / static_cast<double>(n) - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("pairwise sum matches an extended-precision reference") {
    std::vector<double> xs;
    long double ref = 0.0L;
    for (int k = 1; k <= 100000; ++k) {
        double x = 1.0 / static_cast<double>(k);
        xs.push_back(x);
        ref += static_cast<long double>(x);
    }
    double got = pairwise_sum(xs.data(), xs.size());
    CHECK(std::abs(got - static_cast<double>(ref)) < 1e-12 * static_cast<double>(ref));
}

TEST_CASE("kahan summation keeps small addends") {
    KahanSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}

TEST_CASE("projection clamps to the interval") {
    Interval iv{-1.0, 2.0};
    CHECK(project(iv, -5.0) == -1.0);
    CHECK(project(iv, 5.0) == 2.0);
    CHECK(project(iv, 0.25) == 0.25);
    CHECK(iv.contains(0.0));
    CHECK_FALSE(iv.contains(2.5));
    CHECK(iv.midpoint() == 0.5);
    CHECK(iv.width() == 3.0);
}

TEST_CASE("parallel_for matches the serial result at any thread count") {
    std::vector<double> serial(1000), wide(1000);
    for (std::size_t i = 0; i < serial.size(); ++i) serial[i] = static_cast<double>(i * i);
    parallel_for(wide.size(), 4, [&](std::size_t i) { wide[i] = static_cast<double>(i * i); });
    CHECK(wide == serial);
}

TEST_CASE("parallel_for propagates exceptions") {
    CHECK_THROWS_AS(parallel_for(1000, 3,
                                 [](std::size_t i) {
                                     if (i == 500) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("scalar distribution validation") {
    CHECK_THROWS_AS(validate(ScalarDist::uniform(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate(ScalarDist::normal(0.0, -1.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate(ScalarDist::two_point(0.0, 1.5, 1.0)), std::invalid_argument);
    CHECK_NOTHROW(validate(ScalarDist::constant(3.0)));
    CHECK_NOTHROW(validate(ScalarDist::two_point(-1.0, 0.25, 2.0)));
}

TEST_CASE("degenerate detection") {
    CHECK(ScalarDist::constant(2.0).degenerate());
    CHECK(ScalarDist::constant(2.0).is_constant(2.0));
    CHECK_FALSE(ScalarDist::constant(2.0).is_constant(1.0));
    CHECK(ScalarDist::uniform(3.0, 3.0).degenerate());
    CHECK(ScalarDist::normal(1.0, 0.0).degenerate());
    CHECK_FALSE(ScalarDist::uniform(0.0, 1.0).degenerate());
    CHECK(ScalarDist::uniform(3.0, 3.0).sample_point() == 3.0);
}

TEST_CASE("closed-form absolute moments") {
    CHECK(ScalarDist::constant(0.5).abs_moment(4.0) == doctest::Approx(0.0625).epsilon(1e-12));
    // int |x|^2 over [0.9, 1.1] / 0.2
    CHECK(ScalarDist::uniform(0.9, 1.1).abs_moment(2.0) ==
          doctest::Approx((std::pow(1.1, 3) - std::pow(0.9, 3)) / 0.6).epsilon(1e-12));
    CHECK(ScalarDist::uniform(-1.0, 1.0).abs_moment(2.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // sign-straddling support: int |x| over [-1, 2] / 3 = (1/2 + 4/2) / 3
    CHECK(ScalarDist::uniform(-1.0, 2.0).abs_moment(1.0) ==
          doctest::Approx(2.5 / 3.0).epsilon(1e-12));
    CHECK(ScalarDist::uniform(0.0, 1.0).has_closed_abs_moment());
    CHECK_FALSE(ScalarDist::normal(0.0, 1.0).has_closed_abs_moment());
}

TEST_CASE("scalar samples land in their support") {
    Rng rng(11);
    ScalarDist u = ScalarDist::uniform(-0.5, 0.5);
    ScalarDist tp = ScalarDist::two_point(-1.0, 0.3, 2.0);
    for (int i = 0; i < 5000; ++i) {
        double x = u.sample(rng);
        CHECK(x >= -0.5);
        CHECK(x < 0.5);
        double y = tp.sample(rng);
        CHECK((y == -1.0 || y == 2.0));
    }
}

TEST_CASE("base interval laws produce ordered endpoints") {
    Rng rng(12);
    BaseIntervalDist laws[] = {
        OrderStatsUniform{-1.0, 1.0},
        IndependentSorted{ScalarDist::uniform(0.0, 1.0), ScalarDist::normal(0.5, 0.2)},
        FixedWidth{ScalarDist::normal(0.0, 1.0), 0.4},
    };
    for (const auto& law : laws) {
        for (int i = 0; i < 5000; ++i) {
            auto [u, v] = sample_base(law, rng);
            CHECK(u <= v);
        }
    }
}

TEST_CASE("fixed width around a constant center is deterministic") {
    Rng rng(13);
    auto [u, v] = sample_base(BaseIntervalDist{FixedWidth{ScalarDist::constant(0.5), 0.2}}, rng);
    CHECK(u == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(v == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("base interval validation") {
    CHECK_THROWS_AS(validate(BaseIntervalDist{OrderStatsUniform{1.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(BaseIntervalDist{FixedWidth{ScalarDist::constant(0.0), -0.1}}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate(BaseIntervalDist{OrderStatsUniform{0.0, 1.0}}));
}

TEST_SUITE_END();
