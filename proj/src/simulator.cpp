#include "refrule/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "refrule/parallel.hpp"
#include "refrule/summation.hpp"

namespace refrule {

namespace {

constexpr double kAtomPoolThreshold = 0.01;   // pooled frequency that makes an atom
constexpr double kAtomScanThreshold = 0.002;  // per-replication candidate cutoff
constexpr int kMomentWindows = 5;

void check_config(const SimConfig& cfg) {
    if (cfg.steps < 1) throw std::invalid_argument("sim: steps must be >= 1");
    if (cfg.replications < 1) throw std::invalid_argument("sim: replications must be >= 1");
    if (cfg.hist_bins < 1) throw std::invalid_argument("sim: hist_bins must be >= 1");
    long b = cfg.resolved_burnin();
    if (b < 0 || b >= cfg.steps) throw std::invalid_argument("sim: burnin must lie in [0, steps)");
    if (cfg.initial_action && !std::isfinite(*cfg.initial_action))
        throw std::invalid_argument("sim: initial action must be finite");
}

void check_usable(const DynamicsSpec& dynamics) {
    validate(dynamics);
    if (dynamics.random_walk) return;
    StabilityReport gate = stability_check(dynamics);
    if (!gate.passes)
        throw std::invalid_argument(
            "dynamics: persistence moment gate fails (E|A|^p not provably < 1); "
            "set random_walk for the unit-persistence regime");
}

struct RepOutcome {
    double mean = 0.0, var = 0.0, qv = 0.0, cost = 0.0, pmom = 0.0;
    double min = 0.0, max = 0.0;
    std::vector<double> sorted_samples;
    std::vector<std::pair<double, long>> atom_candidates;
    bool diverged = false;
};

// One replication: simulate, then reduce to moments, range and repeated
// exact values. The sample buffer comes back sorted for the later binning
// pass; statistics do not depend on sample order.
RepOutcome simulate_replication(const DynamicsSpec& dynamics, const Policy& policy,
                                const CostFn& cost, const SimConfig& cfg, int rep,
                                std::vector<PathPoint>* trace) {
    RepOutcome out;
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(rep));
    long burnin = cfg.resolved_burnin();

    double prev;
    Interval pending_first{};
    bool have_pending = false;
    if (cfg.initial_action) {
        prev = *cfg.initial_action;
    } else {
        pending_first = sample_interval(dynamics, 0.0, rng);
        prev = pending_first.midpoint();
        have_pending = true;
    }

    out.sorted_samples.reserve(static_cast<std::size_t>(cfg.steps - burnin));
    if (trace) trace->reserve(static_cast<std::size_t>(cfg.steps));
    KahanSum qv_acc, cost_acc;

    for (long t = 1; t <= cfg.steps; ++t) {
        Interval iv = (have_pending && t == 1) ? pending_first : sample_interval(dynamics, prev, rng);
        double action = apply(policy, prev, iv);
        if (!std::isfinite(action)) {
            out.diverged = true;
            return out;
        }
        if (trace) trace->push_back(PathPoint{t, iv.lo, iv.hi, action});
        if (t > burnin) {
            out.sorted_samples.push_back(action);
            double d = action - prev;
            qv_acc.add(d * d);
            cost_acc.add(eval(cost, prev, action));
        }
        prev = action;
    }

    auto& xs = out.sorted_samples;
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    out.min = xs.front();
    out.max = xs.back();
    out.mean = pairwise_sum(xs.data(), n) / static_cast<double>(n);
    double mu = out.mean;
    out.var = pairwise_sum(xs.data(), 0, n, [mu](double x) { return (x - mu) * (x - mu); }) /
              static_cast<double>(n);
    double p = dynamics.moment_order;
    out.pmom = pairwise_sum(xs.data(), 0, n, [p](double x) { return std::pow(std::abs(x), p); }) /
               static_cast<double>(n);
    out.qv = qv_acc.value() / static_cast<double>(n);
    out.cost = cost_acc.value() / static_cast<double>(n);

    long cutoff = std::max<long>(2, static_cast<long>(std::ceil(kAtomScanThreshold * n)));
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && xs[j] == xs[i]) ++j;
        long count = static_cast<long>(j - i);
        if (count >= cutoff) out.atom_candidates.emplace_back(xs[i], count);
        i = j;
    }
    return out;
}

Estimate across_reps(const std::vector<RepOutcome>& reps, double RepOutcome::*field) {
    std::size_t r = reps.size();
    std::vector<double> vals(r);
    for (std::size_t i = 0; i < r; ++i) vals[i] = reps[i].*field;
    Estimate e;
    e.value = pairwise_sum(vals.data(), r) / static_cast<double>(r);
    if (r >= 2) {
        double mu = e.value;
        double ss = pairwise_sum(vals.data(), 0, r, [mu](double x) { return (x - mu) * (x - mu); });
        e.std_error = std::sqrt(ss / static_cast<double>(r - 1) / static_cast<double>(r));
    } else {
        e.std_error = std::numeric_limits<double>::quiet_NaN();
    }
    return e;
}

}  // namespace

PathStats run(const DynamicsSpec& dynamics, const Policy& policy, const CostFn& cost,
              const SimConfig& cfg, std::vector<PathPoint>* first_path) {
    check_config(cfg);
    check_usable(dynamics);
    validate(policy);
    validate(cost);

    int R = cfg.replications;
    std::vector<RepOutcome> reps(static_cast<std::size_t>(R));
    parallel_for(static_cast<std::size_t>(R), cfg.threads, [&](std::size_t r) {
        reps[r] = simulate_replication(dynamics, policy, cost, cfg, static_cast<int>(r),
                                       r == 0 ? first_path : nullptr);
    });

    PathStats stats;
    stats.replications = R;
    stats.retained_steps = cfg.steps - cfg.resolved_burnin();
    for (const auto& rep : reps) stats.diverged = stats.diverged || rep.diverged;
    if (stats.diverged) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        stats.mean = stats.variance = stats.qv = stats.avg_cost = stats.pth_moment =
            Estimate{nan, nan};
        return stats;
    }

    stats.mean = across_reps(reps, &RepOutcome::mean);
    stats.variance = across_reps(reps, &RepOutcome::var);
    stats.qv = across_reps(reps, &RepOutcome::qv);
    stats.avg_cost = across_reps(reps, &RepOutcome::cost);
    stats.pth_moment = across_reps(reps, &RepOutcome::pmom);

    // Pool exact-repeat candidates; a value is an atom if its pooled
    // frequency clears the threshold.
    double total_n = 0.0;
    for (const auto& rep : reps) total_n += static_cast<double>(rep.sorted_samples.size());
    std::map<double, long> pooled;
    for (const auto& rep : reps)
        for (const auto& [value, count] : rep.atom_candidates) pooled[value] += count;
    std::vector<double> atom_locations;
    for (const auto& [value, count] : pooled) {
        if (static_cast<double>(count) > kAtomPoolThreshold * total_n) {
            stats.histogram.atoms.push_back({value, static_cast<double>(count) / total_n});
            atom_locations.push_back(value);
        }
    }

    double lo = reps[0].min, hi = reps[0].max;
    for (const auto& rep : reps) {
        lo = std::min(lo, rep.min);
        hi = std::max(hi, rep.max);
    }
    if (!(lo < hi)) {
        lo -= 0.5;
        hi += 0.5;
    }
    int bins = cfg.hist_bins;
    stats.histogram.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        stats.histogram.edges[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);

    std::vector<std::vector<long>> counts(static_cast<std::size_t>(R),
                                          std::vector<long>(static_cast<std::size_t>(bins), 0));
    double inv_width = static_cast<double>(bins) / (hi - lo);
    parallel_for(static_cast<std::size_t>(R), cfg.threads, [&](std::size_t r) {
        auto& local = counts[r];
        for (double x : reps[r].sorted_samples) {
            if (std::binary_search(atom_locations.begin(), atom_locations.end(), x)) continue;
            int b = static_cast<int>((x - lo) * inv_width);
            b = std::clamp(b, 0, bins - 1);
            ++local[static_cast<std::size_t>(b)];
        }
    });
    stats.histogram.masses.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b < bins; ++b) {
        long c = 0;
        for (int r = 0; r < R; ++r) c += counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
        stats.histogram.masses[static_cast<std::size_t>(b)] = static_cast<double>(c) / total_n;
    }
    return stats;
}

std::vector<PathStats> compare(const DynamicsSpec& dynamics, const std::vector<Policy>& policies,
                               const CostFn& cost, const SimConfig& cfg) {
    if (policies.empty()) throw std::invalid_argument("compare: needs at least one policy");
    std::vector<PathStats> table;
    table.reserve(policies.size());
    for (const auto& policy : policies) table.push_back(run(dynamics, policy, cost, cfg));
    return table;
}

Histogram stationary_histogram(const DynamicsSpec& dynamics, const Policy& policy,
                               const SimConfig& cfg) {
    return run(dynamics, policy, Quadratic{}, cfg).histogram;
}

MomentBoundReport moment_bound_check(const DynamicsSpec& dynamics, const Policy& policy,
                                     const SimConfig& cfg, double p) {
    check_config(cfg);
    validate(dynamics);
    validate(policy);
    if (!(p > 0.0)) throw std::invalid_argument("moment_bound_check: p must be > 0");
    if (!dynamics.random_walk) check_usable(dynamics);
    if (cfg.steps < kMomentWindows)
        throw std::invalid_argument("moment_bound_check: steps must cover the window count");

    long window_len = cfg.steps / kMomentWindows;
    int R = cfg.replications;
    std::vector<std::vector<double>> window_sums(
        static_cast<std::size_t>(R), std::vector<double>(kMomentWindows, 0.0));

    parallel_for(static_cast<std::size_t>(R), cfg.threads, [&](std::size_t r) {
        Rng rng = Rng::stream(cfg.seed, r);
        double prev;
        Interval pending_first{};
        bool have_pending = false;
        if (cfg.initial_action) {
            prev = *cfg.initial_action;
        } else {
            pending_first = sample_interval(dynamics, 0.0, rng);
            prev = pending_first.midpoint();
            have_pending = true;
        }
        std::vector<KahanSum> acc(kMomentWindows);
        long total = window_len * kMomentWindows;
        for (long t = 1; t <= total; ++t) {
            Interval iv = (have_pending && t == 1) ? pending_first : sample_interval(dynamics, prev, rng);
            double action = apply(policy, prev, iv);
            if (!std::isfinite(action)) {
                for (auto& a : acc) a.add(std::numeric_limits<double>::quiet_NaN());
                break;
            }
            acc[static_cast<std::size_t>((t - 1) / window_len)].add(std::pow(std::abs(action), p));
            prev = action;
        }
        for (int w = 0; w < kMomentWindows; ++w) window_sums[r][static_cast<std::size_t>(w)] = acc[static_cast<std::size_t>(w)].value();
    });

    MomentBoundReport report;
    report.window_estimates.resize(kMomentWindows);
    double denom = static_cast<double>(window_len) * static_cast<double>(R);
    for (int w = 0; w < kMomentWindows; ++w) {
        double s = 0.0;
        for (int r = 0; r < R; ++r) s += window_sums[static_cast<std::size_t>(r)][static_cast<std::size_t>(w)];
        report.window_estimates[static_cast<std::size_t>(w)] = s / denom;
    }
    report.running_max = *std::max_element(report.window_estimates.begin(), report.window_estimates.end());
    double prior_max = *std::max_element(report.window_estimates.begin(),
                                         report.window_estimates.end() - 1);
    double last = report.window_estimates.back();
    report.bounded = std::isfinite(last) && last <= 1.05 * prior_max;
    return report;
}

}  // namespace refrule
