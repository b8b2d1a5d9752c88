#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "refrule/quadrature.hpp"
#include "refrule/uniform_analytics.hpp"

using namespace refrule;

TEST_SUITE_BEGIN("analytics");

TEST_CASE("the benchmark moment table") {
    UniformBenchmarkTable t = analytic_table();
    CHECK(t.qv_midpoint == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(t.var_midpoint == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(t.qv_anchor == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(t.var_anchor == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
    CHECK(t.qv_inertia ==
          doctest::Approx(std::numbers::pi / 12.0 - 2.0 / 9.0).epsilon(1e-15));
    CHECK(t.var_inertia == doctest::Approx((std::numbers::pi - 3.0) / 4.0).epsilon(1e-15));
    // numeric spot values, for the avoidance of algebra slips
    CHECK(t.qv_inertia == doctest::Approx(0.0395771655769272).epsilon(1e-13));
    CHECK(t.var_inertia == doctest::Approx(0.0353981633974483).epsilon(1e-13));
}

TEST_CASE("density shapes at hand-picked points") {
    CHECK(density_midpoint(0.25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(density_midpoint(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(density_midpoint(0.75) == doctest::Approx(1.0).epsilon(1e-15));
    AnchorLaw a = density_anchor(0.3);
    CHECK(a.continuous_density == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(a.atom_mass_at_center == 0.5);
    CHECK(density_anchor(0.7).continuous_density == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(density_inertia(0.5) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("the inert density is symmetric about one half") {
    for (double x : {0.05, 0.2, 0.35, 0.45}) {
        CHECK(density_inertia(x) == doctest::Approx(density_inertia(1.0 - x)).epsilon(1e-12));
    }
}

TEST_CASE("conditional squared move of the inert rule") {
    CHECK(conditional_qv_inertia(0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(conditional_qv_inertia(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(conditional_qv_inertia(0.5) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
}

TEST_CASE("closed-form distribution functions") {
    CHECK(cdf(UniformLaw::Midpoint, 0.0) == 0.0);
    CHECK(cdf(UniformLaw::Midpoint, 0.25) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(cdf(UniformLaw::Midpoint, 0.75) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(cdf(UniformLaw::Midpoint, 1.0) == 1.0);
    CHECK(cdf(UniformLaw::Anchor, 0.49) == doctest::Approx(0.2401).epsilon(1e-12));
    CHECK(cdf(UniformLaw::Anchor, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cdf(UniformLaw::Anchor, 1.0) == 1.0);
    CHECK(cdf(UniformLaw::Inertia, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cdf(UniformLaw::Inertia, 0.3) == doctest::Approx(0.09 / 0.58).epsilon(1e-12));
}

TEST_CASE("distribution functions integrate their densities") {
    // the piecewise densities kink at one half, so split integrals there
    auto split_integral = [](auto f, double hi) {
        if (hi <= 0.5) return integrate(f, 0.0, hi);
        return integrate(f, 0.0, 0.5) + integrate(f, 0.5, hi);
    };
    for (double x0 : {0.2, 0.5, 0.9}) {
        CHECK(split_integral(density_midpoint, x0) ==
              doctest::Approx(cdf(UniformLaw::Midpoint, x0)).epsilon(1e-10));
        CHECK(split_integral(density_inertia, x0) ==
              doctest::Approx(cdf(UniformLaw::Inertia, x0)).epsilon(1e-10));
    }
    // the anchor law needs its atom added above the center
    auto anchor_density = [](double x) { return density_anchor(x).continuous_density; };
    double below = integrate(anchor_density, 0.0, 0.4);
    CHECK(below == doctest::Approx(cdf(UniformLaw::Anchor, 0.4)).epsilon(1e-10));
    double above = split_integral(anchor_density, 0.8) + 0.5;
    CHECK(above == doctest::Approx(cdf(UniformLaw::Anchor, 0.8)).epsilon(1e-10));
}

TEST_CASE("laws reject points outside the unit interval") {
    CHECK_THROWS_AS(density_midpoint(1.5), std::domain_error);
    CHECK_THROWS_AS(density_inertia(-0.1), std::domain_error);
    CHECK_THROWS_AS(cdf(UniformLaw::Anchor, 2.0), std::domain_error);
}

TEST_CASE("ks distance vanishes on a histogram built from the law itself") {
    Histogram h;
    int bins = 200;
    for (int i = 0; i <= bins; ++i)
        h.edges.push_back(static_cast<double>(i) / static_cast<double>(bins));
    for (int i = 0; i < bins; ++i)
        h.masses.push_back(cdf(UniformLaw::Midpoint, h.edges[i + 1]) -
                           cdf(UniformLaw::Midpoint, h.edges[i]));
    CHECK(ks_distance(h, UniformLaw::Midpoint) < 1e-12);
    // and separates clearly different laws
    CHECK(ks_distance(h, UniformLaw::Anchor) > 0.1);
}

TEST_CASE("ks distance understands atoms") {
    Histogram h;
    int bins = 200;
    for (int i = 0; i <= bins; ++i)
        h.edges.push_back(static_cast<double>(i) / static_cast<double>(bins));
    for (int i = 0; i < bins; ++i) {
        double lo = h.edges[i], hi = h.edges[i + 1];
        auto tent = [](double x) { return 2.0 * std::min(x, 1.0 - x); };
        h.masses.push_back(0.5 * (tent(lo) + tent(hi)) * (hi - lo));
    }
    h.atoms.push_back({0.5, 0.5});
    CHECK(ks_distance(h, UniformLaw::Anchor) < 1e-4);
}

TEST_SUITE_END();
