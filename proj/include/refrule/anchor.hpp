#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "refrule/dynamics.hpp"
#include "refrule/interval.hpp"

namespace refrule {

// Tools for the variance-minimizing fixed anchor of exogenous interval
// dynamics. The optimal anchor z* balances the expected overshoot from
// below against the expected undershoot from above:
//   psi(z) = E[(L - z) 1{L > z}] + E[(R - z) 1{R < z}] = 0,
// equivalently z* = E[projection of z* onto the interval].

struct BalanceEstimate {
    double value = 0.0;
    double std_error = 0.0;  // zero on the closed-form path
    bool closed_form = false;
};

// psi(z). Closed form when the drift is constant and the base interval is
// OrderStatsUniform; otherwise a Monte Carlo average over n_samples draws.
BalanceEstimate balance_residual(const DynamicsSpec& dynamics, double z, long n_samples = 200000,
                                 std::uint64_t seed = 42);

struct SelfConsistencyReport {
    double gap = 0.0;  // |z - E[projection of z]|
    double std_error = 0.0;
};

SelfConsistencyReport self_consistency_check(const DynamicsSpec& dynamics, double z,
                                             long n_samples = 200000, std::uint64_t seed = 42);

struct AnchorSolution {
    double z_star = 0.0;
    double variance_at_z = 0.0;  // E[(projection of z* - z*)^2]
    double balance_at_z = 0.0;
    double curvature_at_z = 0.0;  // 2 P(z* outside the open interval)
    // Set when psi vanishes on a whole interval (every draw contains it);
    // z_star is then its midpoint.
    std::optional<Interval> flat_interval;
    bool converged = false;
    std::string diagnostics;
};

// Bisection on psi over the sampled interval range, with one common set of
// draws reused for every probe so the empirical psi is monotone.
AnchorSolution solve_anchor(const DynamicsSpec& dynamics, double tol = 1e-6,
                            long n_samples = 500000, std::uint64_t seed = 42);

}  // namespace refrule
