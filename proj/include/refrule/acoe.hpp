#pragma once

#include <cstdint>
#include <vector>

#include "refrule/cost.hpp"
#include "refrule/dynamics.hpp"
#include "refrule/policy.hpp"
#include "refrule/simulator.hpp"

namespace refrule {

// Relative value iteration for the long-run average cost of adjusting
// against exogenously drawn feasible intervals. The expectation is frozen
// into a fixed set of sampled intervals, so every sweep applies the same
// deterministic operator and the iteration can be driven to a tight
// fixed-point tolerance.
struct AcoeConfig {
    int grid_size = 201;       // state grid points across the state range
    int noise_samples = 20000; // frozen interval draws behind the expectation
    double tolerance = 1e-9;   // sup-norm change that counts as converged
    int max_sweeps = 5000;
    int coarse_points = 101;   // first-stage scan of the action range
    int golden_iters = 40;     // golden-section steps inside the best cell
    std::uint64_t seed = 42;
    int threads = 0;
};

struct ValueSolution {
    std::vector<double> grid;
    std::vector<double> relative_value;  // normalized so its minimum is zero
    std::vector<double> targets;         // minimizing action per grid state
    double rho = 0.0;                    // average-cost estimate, final sweep
    int sweeps = 0;
    bool converged = false;
    Interval state_range;
};

std::vector<Interval> draw_noise_set(const DynamicsSpec& dynamics, int count, std::uint64_t seed);

// Requires exogenous dynamics (persistence identically zero, not a random
// walk) whose intervals stay inside state_range, and a translation-invariant
// adjustment cost.
ValueSolution solve(const DynamicsSpec& dynamics, Interval state_range, const CostFn& cost,
                    const AcoeConfig& cfg);

// Same iteration on a caller-supplied noise set; solve() delegates here.
ValueSolution solve_with_samples(std::vector<Interval> noise, Interval state_range,
                                 const CostFn& cost, const AcoeConfig& cfg);

// The solution's target column as a usable reference rule. Refuses an
// unconverged solution unless forced.
TabulatedReference policy_from(const ValueSolution& sol, bool force = false);

// Simulates the solved rule and reports the usual path statistics; the
// average cost should reproduce rho.
PathStats evaluate_solution(const DynamicsSpec& dynamics, const ValueSolution& sol,
                            const CostFn& cost, const SimConfig& cfg);

// Least-squares slope of the target map over the central fraction of the
// state range (boundary cells excluded).
double target_slope(const ValueSolution& sol, double inner_fraction = 0.5);

}  // namespace refrule
