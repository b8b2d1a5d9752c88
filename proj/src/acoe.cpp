#include "refrule/acoe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "refrule/parallel.hpp"

namespace refrule {

namespace {

// Piecewise-linear read of h on a uniform grid.
struct GridInterp {
    double lo = 0.0;
    double step = 0.0;
    int cells = 0;

    std::pair<int, double> locate(double x) const {
        double u = (x - lo) / step;
        int i = std::clamp(static_cast<int>(u), 0, cells - 1);
        return {i, u - static_cast<double>(i)};
    }
};

// The per-sample contribution of an interval depends on where the probe z
// falls: below the interval the projection sticks at the lower edge, above
// it at the upper edge, inside it follows z. Sorting the edges once lets a
// sweep turn the sample average into two running sums plus a straddle count,
// so each probe costs two binary searches instead of a pass over the noise.
struct SweepTables {
    const std::vector<double>& lo_sorted;
    const std::vector<double>& hi_sorted;
    std::vector<double> suffix_h_lo;  // suffix sums of h at the sorted lower edges
    std::vector<double> prefix_h_hi;  // prefix sums of h at the sorted upper edges
};

struct StateScratch {
    std::vector<double> suffix_cost_lo;
    std::vector<double> prefix_cost_hi;
};

double probe(const SweepTables& tables, const StateScratch& scratch, const CostFn& cost, double s,
             double z, const GridInterp& gi, const std::vector<double>& h) {
    const auto& lo = tables.lo_sorted;
    const auto& hi = tables.hi_sorted;
    std::size_t m = lo.size();
    std::size_t idx_lo = static_cast<std::size_t>(
        std::upper_bound(lo.begin(), lo.end(), z) - lo.begin());  // count of lower edges <= z
    std::size_t idx_hi = static_cast<std::size_t>(
        std::lower_bound(hi.begin(), hi.end(), z) - hi.begin());  // count of upper edges < z
    double total = scratch.suffix_cost_lo[idx_lo] + tables.suffix_h_lo[idx_lo] +
                   scratch.prefix_cost_hi[idx_hi] + tables.prefix_h_hi[idx_hi];
    double straddle = static_cast<double>(idx_lo - idx_hi);
    if (straddle > 0.0) {
        auto [i, w] = gi.locate(z);
        double hz = h[static_cast<std::size_t>(i)] +
                    w * (h[static_cast<std::size_t>(i) + 1] - h[static_cast<std::size_t>(i)]);
        total += straddle * (eval(cost, s, z) + hz);
    }
    return total / static_cast<double>(m);
}

}  // namespace

std::vector<Interval> draw_noise_set(const DynamicsSpec& dynamics, int count, std::uint64_t seed) {
    validate(dynamics);
    if (count < 1) throw std::invalid_argument("acoe: noise_samples must be >= 1");
    Rng rng = Rng::stream(seed, 0);
    std::vector<Interval> noise(static_cast<std::size_t>(count));
    for (auto& iv : noise) iv = sample_interval(dynamics, 0.0, rng);
    return noise;
}

ValueSolution solve(const DynamicsSpec& dynamics, Interval state_range, const CostFn& cost,
                    const AcoeConfig& cfg) {
    validate(dynamics);
    if (!dynamics.persistence.is_constant(0.0) || dynamics.random_walk)
        throw std::invalid_argument(
            "acoe: requires exogenous intervals (persistence identically 0, no random walk)");
    return solve_with_samples(draw_noise_set(dynamics, cfg.noise_samples, cfg.seed), state_range,
                              cost, cfg);
}

ValueSolution solve_with_samples(std::vector<Interval> noise, Interval state_range,
                                 const CostFn& cost, const AcoeConfig& cfg) {
    validate(cost);
    if (!is_translation_invariant(cost))
        throw std::invalid_argument("acoe: cost must charge moves, not positions");
    if (!state_range.valid() || !(state_range.lo < state_range.hi))
        throw std::invalid_argument("acoe: state range must be a nondegenerate interval");
    if (cfg.grid_size < 2) throw std::invalid_argument("acoe: grid_size must be >= 2");
    if (cfg.coarse_points < 3) throw std::invalid_argument("acoe: coarse_points must be >= 3");
    if (cfg.golden_iters < 0) throw std::invalid_argument("acoe: golden_iters must be >= 0");
    if (cfg.max_sweeps < 1) throw std::invalid_argument("acoe: max_sweeps must be >= 1");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("acoe: tolerance must be > 0");
    if (noise.empty()) throw std::invalid_argument("acoe: noise set is empty");
    for (const auto& iv : noise) {
        if (!iv.valid()) throw std::invalid_argument("acoe: noise set contains an invalid interval");
        if (iv.lo < state_range.lo || iv.hi > state_range.hi)
            throw std::invalid_argument("acoe: sampled interval escapes the state range");
    }

    std::size_t n = static_cast<std::size_t>(cfg.grid_size);
    std::size_t m = noise.size();

    ValueSolution sol;
    sol.state_range = state_range;
    sol.grid.resize(n);
    double span = state_range.hi - state_range.lo;
    for (std::size_t i = 0; i < n; ++i)
        sol.grid[i] = state_range.lo + span * static_cast<double>(i) / static_cast<double>(n - 1);

    GridInterp gi{state_range.lo, span / static_cast<double>(n - 1), static_cast<int>(n) - 1};

    std::vector<double> lo_sorted(m), hi_sorted(m);
    for (std::size_t k = 0; k < m; ++k) {
        lo_sorted[k] = noise[k].lo;
        hi_sorted[k] = noise[k].hi;
    }
    std::sort(lo_sorted.begin(), lo_sorted.end());
    std::sort(hi_sorted.begin(), hi_sorted.end());

    // Interpolation stencils at the sorted edges never change across sweeps.
    std::vector<std::pair<int, double>> at_lo(m), at_hi(m);
    for (std::size_t k = 0; k < m; ++k) {
        at_lo[k] = gi.locate(lo_sorted[k]);
        at_hi[k] = gi.locate(hi_sorted[k]);
    }

    std::vector<double> h(n, 0.0), h_new(n, 0.0);
    std::vector<double> targets(n, state_range.lo);
    SweepTables tables{lo_sorted, hi_sorted, std::vector<double>(m + 1, 0.0),
                       std::vector<double>(m + 1, 0.0)};

    std::size_t coarse = static_cast<std::size_t>(cfg.coarse_points);
    std::vector<double> coarse_z(coarse);
    for (std::size_t j = 0; j < coarse; ++j)
        coarse_z[j] =
            state_range.lo + span * static_cast<double>(j) / static_cast<double>(coarse - 1);

    constexpr double inv_phi = 0.6180339887498948482;
    double rho = 0.0;
    double delta = std::numeric_limits<double>::infinity();
    int sweep = 0;
    while (sweep < cfg.max_sweeps) {
        ++sweep;
        tables.suffix_h_lo[m] = 0.0;
        for (std::size_t k = m; k-- > 0;) {
            auto [i, w] = at_lo[k];
            double hv = h[static_cast<std::size_t>(i)] +
                        w * (h[static_cast<std::size_t>(i) + 1] - h[static_cast<std::size_t>(i)]);
            tables.suffix_h_lo[k] = tables.suffix_h_lo[k + 1] + hv;
        }
        tables.prefix_h_hi[0] = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            auto [i, w] = at_hi[k];
            double hv = h[static_cast<std::size_t>(i)] +
                        w * (h[static_cast<std::size_t>(i) + 1] - h[static_cast<std::size_t>(i)]);
            tables.prefix_h_hi[k + 1] = tables.prefix_h_hi[k] + hv;
        }

        parallel_for(n, cfg.threads, [&](std::size_t i) {
            thread_local StateScratch scratch;
            scratch.suffix_cost_lo.assign(m + 1, 0.0);
            scratch.prefix_cost_hi.assign(m + 1, 0.0);
            double s = sol.grid[i];
            for (std::size_t k = m; k-- > 0;)
                scratch.suffix_cost_lo[k] = scratch.suffix_cost_lo[k + 1] + eval(cost, s, lo_sorted[k]);
            for (std::size_t k = 0; k < m; ++k)
                scratch.prefix_cost_hi[k + 1] = scratch.prefix_cost_hi[k] + eval(cost, s, hi_sorted[k]);

            auto value_at = [&](double z) { return probe(tables, scratch, cost, s, z, gi, h); };

            std::size_t best_j = 0;
            double best_val = value_at(coarse_z[0]);
            for (std::size_t j = 1; j < coarse; ++j) {
                double v = value_at(coarse_z[j]);
                if (v < best_val) {
                    best_val = v;
                    best_j = j;
                }
            }
            double best_z = coarse_z[best_j];

            double a = coarse_z[best_j == 0 ? 0 : best_j - 1];
            double b = coarse_z[std::min(best_j + 1, coarse - 1)];
            double x1 = b - inv_phi * (b - a);
            double x2 = a + inv_phi * (b - a);
            double f1 = value_at(x1);
            double f2 = value_at(x2);
            auto consider = [&](double z, double v) {
                if (v < best_val) {
                    best_val = v;
                    best_z = z;
                }
            };
            consider(x1, f1);
            consider(x2, f2);
            for (int it = 0; it < cfg.golden_iters; ++it) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - inv_phi * (b - a);
                    f1 = value_at(x1);
                    consider(x1, f1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + inv_phi * (b - a);
                    f2 = value_at(x2);
                    consider(x2, f2);
                }
            }
            h_new[i] = best_val;
            targets[i] = best_z;
        });

        rho = *std::min_element(h_new.begin(), h_new.end());
        delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double normalized = h_new[i] - rho;
            delta = std::max(delta, std::abs(normalized - h[i]));
            h[i] = normalized;
        }
        if (delta < cfg.tolerance) {
            sol.converged = true;
            break;
        }
    }

    sol.relative_value = h;
    sol.targets = targets;
    sol.rho = rho;
    sol.sweeps = sweep;
    return sol;
}

TabulatedReference policy_from(const ValueSolution& sol, bool force) {
    if (!sol.converged && !force)
        throw std::runtime_error("acoe: solution did not converge; pass force to use it anyway");
    TabulatedReference table{sol.grid, sol.targets};
    validate(Policy{table});
    return table;
}

PathStats evaluate_solution(const DynamicsSpec& dynamics, const ValueSolution& sol,
                            const CostFn& cost, const SimConfig& cfg) {
    return run(dynamics, Policy{policy_from(sol)}, cost, cfg);
}

double target_slope(const ValueSolution& sol, double inner_fraction) {
    if (!(inner_fraction > 0.0 && inner_fraction <= 1.0))
        throw std::invalid_argument("target_slope: inner_fraction must lie in (0,1]");
    double span = sol.state_range.hi - sol.state_range.lo;
    double margin = 0.5 * (1.0 - inner_fraction) * span;
    double lo = sol.state_range.lo + margin;
    double hi = sol.state_range.hi - margin;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        double x = sol.grid[i];
        if (x < lo || x > hi) continue;
        double y = sol.targets[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1.0;
    }
    if (count < 2.0) throw std::invalid_argument("target_slope: too few interior grid points");
    double denom = count * sxx - sx * sx;
    return (count * sxy - sx * sy) / denom;
}

}  // namespace refrule
