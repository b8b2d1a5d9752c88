#include "refrule/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "refrule/summation.hpp"

namespace refrule {

DynamicsSpec uniform_benchmark() {
    DynamicsSpec spec;
    spec.persistence = ScalarDist::constant(0.0);
    spec.drift = ScalarDist::constant(0.0);
    spec.base = OrderStatsUniform{0.0, 1.0};
    spec.moment_order = 2.0;
    spec.random_walk = false;
    return spec;
}

void validate(const DynamicsSpec& spec) {
    validate(spec.persistence);
    validate(spec.drift);
    validate(spec.base);
    if (!(spec.moment_order >= 2.0))
        throw std::invalid_argument("dynamics: moment order p must be >= 2");
    if (spec.random_walk && !spec.persistence.is_constant(1.0))
        throw std::invalid_argument(
            "dynamics: random_walk requires persistence identically 1 (got a != const(1))");
}

Interval sample_interval(const DynamicsSpec& spec, double prev_action, Rng& rng) {
    double a = spec.persistence.sample(rng);
    double b = spec.drift.sample(rng);
    auto [u, v] = sample_base(spec.base, rng);
    double anchor = a * prev_action + b;
    return Interval{anchor + u, anchor + v};
}

StabilityReport stability_check(const DynamicsSpec& spec, long n_samples, std::uint64_t seed) {
    validate(spec);
    StabilityReport report;
    double p = spec.moment_order;
    if (spec.persistence.has_closed_abs_moment()) {
        report.moment_estimate = spec.persistence.abs_moment(p);
        report.std_error = 0.0;
        report.closed_form = true;
    } else {
        if (n_samples < 10000)
            throw std::invalid_argument("stability_check: need n_samples >= 10000 for sampled laws");
        Rng rng(seed);
        std::vector<double> values(static_cast<std::size_t>(n_samples));
        for (auto& v : values) v = std::pow(std::abs(spec.persistence.sample(rng)), p);
        std::size_t n = values.size();
        double mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
        double ss = pairwise_sum(values.data(), 0, n,
                                 [mean](double x) { return (x - mean) * (x - mean); });
        double var = ss / static_cast<double>(n);
        report.moment_estimate = mean;
        report.std_error = std::sqrt(var / static_cast<double>(n));
        report.closed_form = false;
    }
    report.passes = report.moment_estimate + 3.0 * report.std_error < 1.0;
    return report;
}

}  // namespace refrule
