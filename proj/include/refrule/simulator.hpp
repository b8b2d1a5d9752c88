#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "refrule/cost.hpp"
#include "refrule/dynamics.hpp"
#include "refrule/histogram.hpp"
#include "refrule/policy.hpp"

namespace refrule {

struct SimConfig {
    long steps = 1000000;
    long burnin = -1;  // negative: use 10% of steps
    int replications = 8;
    std::uint64_t seed = 42;
    // Action in force before the first period. Unset: the midpoint of the
    // first sampled interval (drawn with previous action 0 when the
    // persistence coefficient matters, then reused as period one's interval).
    std::optional<double> initial_action;
    int hist_bins = 200;
    int threads = 0;  // 0: hardware concurrency

    long resolved_burnin() const { return burnin >= 0 ? burnin : steps / 10; }
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;  // across replications; NaN with one replication
};

struct PathStats {
    Estimate mean;
    Estimate variance;
    Estimate qv;        // mean squared one-step increment
    Estimate avg_cost;  // mean per-period cost
    Estimate pth_moment;
    Histogram histogram;
    bool diverged = false;
    long retained_steps = 0;  // post-burnin samples per replication
    int replications = 0;
};

struct PathPoint {
    long t = 0;
    double lo = 0.0;
    double hi = 0.0;
    double action = 0.0;
};

// Simulates `replications` independent paths and pools post-burnin
// statistics. Replication r uses stream (seed, r), so results are identical
// at every thread count. Same estimator for qv and for avg_cost, so the two
// coincide exactly under the quadratic cost. If `first_path` is given it
// receives replication 0's full trajectory, burn-in included.
PathStats run(const DynamicsSpec& dynamics, const Policy& policy, const CostFn& cost,
              const SimConfig& cfg, std::vector<PathPoint>* first_path = nullptr);

// Runs each policy against the same interval draws (policies consume no
// randomness, so equal seeds give common random numbers).
std::vector<PathStats> compare(const DynamicsSpec& dynamics, const std::vector<Policy>& policies,
                               const CostFn& cost, const SimConfig& cfg);

Histogram stationary_histogram(const DynamicsSpec& dynamics, const Policy& policy,
                               const SimConfig& cfg);

struct MomentBoundReport {
    std::vector<double> window_estimates;  // E|P_t|^p averaged per window
    double running_max = 0.0;
    bool bounded = false;  // last window <= 1.05 * max of the earlier windows
};

// Tracks E|P_t|^p over the whole path (no burn-in discard) in five equal
// windows. Stable dynamics must show a flat profile; a random walk grows.
MomentBoundReport moment_bound_check(const DynamicsSpec& dynamics, const Policy& policy,
                                     const SimConfig& cfg, double p);

}  // namespace refrule
