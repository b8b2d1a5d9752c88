#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "refrule/acoe.hpp"

using namespace refrule;

namespace {

AcoeConfig small_cfg() {
    AcoeConfig cfg;
    cfg.grid_size = 41;
    cfg.noise_samples = 200;
    cfg.tolerance = 1e-9;
    return cfg;
}

double interp_h(const ValueSolution& sol, double z) {
    double lo = sol.grid.front(), hi = sol.grid.back();
    double step = (hi - lo) / static_cast<double>(sol.grid.size() - 1);
    double pos = (z - lo) / step;
    std::size_t i = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), sol.grid.size() - 2);
    double t = pos - static_cast<double>(i);
    return sol.relative_value[i] + t * (sol.relative_value[i + 1] - sol.relative_value[i]);
}

double naive_value(double s, double z, const std::vector<Interval>& noise,
                   const ValueSolution& sol, const CostFn& cost) {
    double acc = 0.0;
    for (const auto& iv : noise) {
        double y = project(iv, z);
        acc += eval(cost, s, y) + interp_h(sol, y);
    }
    return acc / static_cast<double>(noise.size());
}

}  // namespace

TEST_SUITE_BEGIN("acoe");

TEST_CASE("noise draws are reproducible and ordered") {
    auto a = draw_noise_set(uniform_benchmark(), 500, 7);
    auto b = draw_noise_set(uniform_benchmark(), 500, 7);
    auto c = draw_noise_set(uniform_benchmark(), 500, 8);
    REQUIRE(a.size() == 500);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].valid());
        same = same && a[i].lo == b[i].lo && a[i].hi == b[i].hi;
        differs = differs || a[i].lo != c[i].lo;
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("the fixed point satisfies the one-step equation under a naive evaluator") {
    auto noise = draw_noise_set(uniform_benchmark(), 200, 42);
    ValueSolution sol = solve_with_samples(noise, Interval{0.0, 1.0}, Quadratic{}, small_cfg());
    REQUIRE(sol.converged);
    for (std::size_t i : {std::size_t{0}, std::size_t{10}, std::size_t{20}, std::size_t{30},
                          std::size_t{40}}) {
        double s = sol.grid[i];
        double solved = sol.relative_value[i] + sol.rho;
        double at_target = naive_value(s, sol.targets[i], noise, sol, Quadratic{});
        CHECK(at_target == doctest::Approx(solved).epsilon(1e-6));
        // an exhaustive scan cannot do meaningfully better than the solver
        double best = at_target;
        for (int k = 0; k <= 2000; ++k) {
            double z = static_cast<double>(k) / 2000.0;
            best = std::min(best, naive_value(s, z, noise, sol, Quadratic{}));
        }
        CHECK(best >= solved - 1e-8);
        CHECK(best <= solved + 1e-4);
    }
}

TEST_CASE("identical configurations give bit-identical solutions") {
    ValueSolution a = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, small_cfg());
    ValueSolution b = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, small_cfg());
    CHECK(a.rho == b.rho);
    CHECK(a.targets == b.targets);
    CHECK(a.relative_value == b.relative_value);
}

TEST_CASE("thread count never changes the solution") {
    AcoeConfig one = small_cfg();
    one.threads = 1;
    AcoeConfig many = small_cfg();
    many.threads = 3;
    ValueSolution a = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, one);
    ValueSolution b = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, many);
    CHECK(a.rho == b.rho);
    CHECK(a.targets == b.targets);
}

TEST_CASE("a mirror-symmetric ensemble yields a mirror-symmetric rule") {
    auto half = draw_noise_set(uniform_benchmark(), 400, 11);
    std::vector<Interval> sym = half;
    for (const auto& iv : half) sym.push_back(Interval{1.0 - iv.hi, 1.0 - iv.lo});
    AcoeConfig cfg;
    cfg.grid_size = 81;
    cfg.tolerance = 1e-6;
    ValueSolution sol = solve_with_samples(sym, Interval{0.0, 1.0}, Quadratic{}, cfg);
    REQUIRE(sol.converged);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        std::size_t j = sol.grid.size() - 1 - i;
        worst = std::max(worst, std::abs(sol.targets[i] + sol.targets[j] - 1.0));
    }
    CHECK(worst <= 10.0 * cfg.tolerance);
}

TEST_CASE("refining the grid and the ensemble barely moves the average cost") {
    AcoeConfig coarse;
    coarse.grid_size = 101;
    coarse.noise_samples = 1000;
    coarse.tolerance = 1e-8;
    AcoeConfig fine = coarse;
    fine.grid_size = 201;
    fine.noise_samples = 2000;
    ValueSolution a = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, coarse);
    ValueSolution b = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, fine);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.rho - b.rho) < 0.01);
}

TEST_CASE("point intervals make the average cost the mean squared jump") {
    DynamicsSpec spec;
    spec.drift = ScalarDist::uniform(0.0, 1.0);
    spec.base = FixedWidth{ScalarDist::constant(0.0), 0.0};
    AcoeConfig cfg;
    cfg.grid_size = 51;
    cfg.noise_samples = 2000;
    cfg.tolerance = 1e-8;
    ValueSolution sol = solve(spec, Interval{0.0, 1.0}, Quadratic{}, cfg);
    REQUIRE(sol.converged);
    // successive independent uniforms: E[(x' - x)^2] = 1/6
    CHECK(sol.rho == doctest::Approx(1.0 / 6.0).epsilon(0.12));
}

TEST_CASE("an unconverged solution must be forced into a policy") {
    AcoeConfig cfg = small_cfg();
    cfg.max_sweeps = 1;
    cfg.tolerance = 1e-12;
    ValueSolution sol = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, cfg);
    REQUIRE_FALSE(sol.converged);
    CHECK_THROWS_AS(policy_from(sol), std::runtime_error);
    TabulatedReference forced = policy_from(sol, true);
    CHECK(forced.grid.size() == sol.grid.size());
}

TEST_CASE("the solver rejects ill-posed problems") {
    DynamicsSpec drifting = uniform_benchmark();
    drifting.persistence = ScalarDist::constant(0.5);
    CHECK_THROWS_AS(solve(drifting, Interval{0.0, 1.0}, Quadratic{}, small_cfg()),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        solve(uniform_benchmark(), Interval{0.0, 1.0}, SquaredDistanceTo{0.5}, small_cfg()),
        std::invalid_argument);
    CHECK_THROWS_AS(solve(uniform_benchmark(), Interval{0.2, 0.8}, Quadratic{}, small_cfg()),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve(uniform_benchmark(), Interval{1.0, 0.0}, Quadratic{}, small_cfg()),
                    std::invalid_argument);
}

TEST_CASE("slope extraction is exact on a linear target map") {
    ValueSolution sol;
    for (int i = 0; i <= 100; ++i) {
        double s = static_cast<double>(i) / 100.0;
        sol.grid.push_back(s);
        sol.relative_value.push_back(0.0);
        sol.targets.push_back(0.9 * s + 0.05);
    }
    sol.state_range = Interval{0.0, 1.0};
    CHECK(target_slope(sol) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK_THROWS_AS(target_slope(sol, 0.0), std::invalid_argument);
}

TEST_CASE("simulating the solved rule reproduces its average cost") {
    AcoeConfig cfg;
    cfg.grid_size = 101;
    cfg.noise_samples = 2000;
    cfg.tolerance = 1e-8;
    ValueSolution sol = solve(uniform_benchmark(), Interval{0.0, 1.0}, Quadratic{}, cfg);
    REQUIRE(sol.converged);
    SimConfig sim;
    sim.steps = 200000;
    sim.replications = 4;
    sim.seed = 43;
    PathStats stats = evaluate_solution(uniform_benchmark(), sol, Quadratic{}, sim);
    CHECK(stats.avg_cost.value == doctest::Approx(sol.rho).epsilon(0.4));
    CHECK(std::abs(stats.avg_cost.value - sol.rho) < 0.015);
}

TEST_SUITE_END();
