#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "refrule/simulator.hpp"
#include "refrule/uniform_analytics.hpp"

using namespace refrule;

namespace {

SimConfig small_cfg() {
    SimConfig cfg;
    cfg.steps = 100000;
    cfg.replications = 4;
    cfg.seed = 42;
    cfg.hist_bins = 100;
    return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("simulator");

TEST_CASE("quadratic variation and quadratic cost share an estimator") {
    PathStats s = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, small_cfg());
    CHECK(s.qv.value == s.avg_cost.value);
    CHECK(s.qv.std_error == s.avg_cost.std_error);
}

TEST_CASE("every recorded action is feasible") {
    std::vector<PathPoint> path;
    SimConfig cfg = small_cfg();
    cfg.steps = 20000;
    cfg.replications = 1;
    run(uniform_benchmark(), Policy{Anchor{0.5}}, Quadratic{}, cfg, &path);
    REQUIRE(path.size() == 20000);
    for (const auto& p : path) {
        CHECK(p.action >= p.lo);
        CHECK(p.action <= p.hi);
    }
}

TEST_CASE("identical configurations reproduce identical statistics") {
    SimConfig cfg = small_cfg();
    PathStats a = run(uniform_benchmark(), Policy{StatusQuo{}}, Quadratic{}, cfg);
    PathStats b = run(uniform_benchmark(), Policy{StatusQuo{}}, Quadratic{}, cfg);
    CHECK(a.qv.value == b.qv.value);
    CHECK(a.mean.value == b.mean.value);
    CHECK(a.variance.value == b.variance.value);
}

TEST_CASE("thread count never changes the numbers") {
    SimConfig one = small_cfg();
    one.threads = 1;
    SimConfig many = small_cfg();
    many.threads = 3;
    PathStats a = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, one);
    PathStats b = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, many);
    CHECK(a.qv.value == b.qv.value);
    CHECK(a.variance.value == b.variance.value);
    CHECK(a.histogram.masses == b.histogram.masses);
}

TEST_CASE("the three benchmark rules order as expected") {
    auto table = compare(uniform_benchmark(),
                         {midpoint_rule(), Policy{Anchor{0.5}}, Policy{StatusQuo{}}}, Quadratic{},
                         small_cfg());
    REQUIRE(table.size() == 3);
    // activity: the inert rule moves least, the midpoint rule most
    CHECK(table[2].qv.value < table[1].qv.value);
    CHECK(table[1].qv.value < table[0].qv.value);
    // dispersion: anchoring concentrates, the midpoint rule spreads
    CHECK(table[1].variance.value < table[2].variance.value);
    CHECK(table[2].variance.value < table[0].variance.value);
}

TEST_CASE("a single-policy comparison degenerates to a plain run") {
    SimConfig cfg = small_cfg();
    auto table = compare(uniform_benchmark(), {Policy{Anchor{0.25}}}, Quadratic{}, cfg);
    PathStats direct = run(uniform_benchmark(), Policy{Anchor{0.25}}, Quadratic{}, cfg);
    REQUIRE(table.size() == 1);
    CHECK(table[0].qv.value == direct.qv.value);
    CHECK(table[0].mean.value == direct.mean.value);
}

TEST_CASE("the central anchor accumulates an atom, the others do not") {
    SimConfig cfg = small_cfg();
    cfg.steps = 200000;
    PathStats anchor = run(uniform_benchmark(), Policy{Anchor{0.5}}, Quadratic{}, cfg);
    REQUIRE(anchor.histogram.atoms.size() == 1);
    CHECK(anchor.histogram.atoms[0].location == 0.5);
    CHECK(anchor.histogram.atoms[0].mass == doctest::Approx(0.5).epsilon(0.06));
    PathStats sq = run(uniform_benchmark(), Policy{StatusQuo{}}, Quadratic{}, cfg);
    CHECK(sq.histogram.atoms.empty());
    PathStats mid = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, cfg);
    CHECK(mid.histogram.atoms.empty());
    CHECK(anchor.histogram.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("second moment of the midpoint rule matches variance plus squared mean") {
    PathStats s = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, small_cfg());
    CHECK(s.pth_moment.value == doctest::Approx(7.0 / 24.0).epsilon(0.02));
    CHECK(s.mean.value == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("a deterministic contraction follows its closed-form path") {
    DynamicsSpec spec;
    spec.persistence = ScalarDist::constant(0.5);
    spec.base = FixedWidth{ScalarDist::constant(0.0), 0.0};
    SimConfig cfg;
    cfg.steps = 30;
    cfg.burnin = 0;
    cfg.replications = 1;
    cfg.initial_action = 1.0;
    std::vector<PathPoint> path;
    run(spec, Policy{StatusQuo{}}, Quadratic{}, cfg, &path);
    REQUIRE(path.size() == 30);
    double expect = 1.0;
    for (const auto& p : path) {
        expect *= 0.5;
        CHECK(p.action == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("standard errors need more than one replication") {
    SimConfig cfg = small_cfg();
    cfg.replications = 1;
    cfg.steps = 20000;
    PathStats s = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, cfg);
    CHECK(std::isnan(s.qv.std_error));
    SimConfig cfg8 = small_cfg();
    cfg8.steps = 20000;
    PathStats s8 = run(uniform_benchmark(), midpoint_rule(), Quadratic{}, cfg8);
    CHECK(s8.qv.std_error > 0.0);
}

TEST_CASE("burn-in defaults to a tenth of the path") {
    SimConfig cfg;
    cfg.steps = 12345;
    CHECK(cfg.resolved_burnin() == 1234);
    cfg.burnin = 17;
    CHECK(cfg.resolved_burnin() == 17);
}

TEST_CASE("unstable dynamics are refused up front") {
    DynamicsSpec spec;
    spec.persistence = ScalarDist::constant(2.0);
    spec.base = FixedWidth{ScalarDist::constant(0.0), 0.0};
    CHECK_THROWS_AS(run(spec, Policy{StatusQuo{}}, Quadratic{}, small_cfg()),
                    std::invalid_argument);
}

TEST_CASE("config validation refuses nonsense sizes") {
    SimConfig cfg = small_cfg();
    cfg.steps = 0;
    CHECK_THROWS_AS(run(uniform_benchmark(), midpoint_rule(), Quadratic{}, cfg),
                    std::invalid_argument);
    cfg = small_cfg();
    cfg.burnin = cfg.steps;
    CHECK_THROWS_AS(run(uniform_benchmark(), midpoint_rule(), Quadratic{}, cfg),
                    std::invalid_argument);
    cfg = small_cfg();
    cfg.replications = 0;
    CHECK_THROWS_AS(run(uniform_benchmark(), midpoint_rule(), Quadratic{}, cfg),
                    std::invalid_argument);
}

TEST_CASE("moment windows stay flat for the benchmark") {
    SimConfig cfg = small_cfg();
    MomentBoundReport rep = moment_bound_check(uniform_benchmark(), midpoint_rule(), cfg, 2.0);
    CHECK(rep.bounded);
    REQUIRE(rep.window_estimates.size() == 5);
    CHECK(rep.running_max == doctest::Approx(7.0 / 24.0).epsilon(0.05));
}

TEST_CASE("moment windows grow for the random walk") {
    DynamicsSpec walk;
    walk.persistence = ScalarDist::constant(1.0);
    walk.base = OrderStatsUniform{-0.5, 0.5};
    walk.random_walk = true;
    SimConfig cfg;
    // Many short paths: the per-window noise shrinks with the replication
    // count while the growth signal does not depend on the path length.
    cfg.steps = 25000;
    cfg.replications = 320;
    cfg.seed = 42;
    cfg.initial_action = 0.0;
    MomentBoundReport rep = moment_bound_check(walk, Policy{StatusQuo{}}, cfg, 2.0);
    CHECK_FALSE(rep.bounded);
    CHECK(rep.window_estimates.back() > rep.window_estimates.front());
}

TEST_CASE("stationary histogram integrates to one") {
    SimConfig cfg = small_cfg();
    Histogram h = stationary_histogram(uniform_benchmark(), Policy{StatusQuo{}}, cfg);
    CHECK(h.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h.cdf(-0.1) == 0.0);
}

TEST_SUITE_END();
