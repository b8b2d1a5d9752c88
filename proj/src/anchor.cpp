#include "refrule/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "refrule/summation.hpp"

namespace refrule {

namespace {

void require_exogenous(const DynamicsSpec& dynamics, const char* who) {
    validate(dynamics);
    if (!dynamics.persistence.is_constant(0.0) || dynamics.random_walk)
        throw std::invalid_argument(std::string(who) +
                                    ": requires exogenous intervals (persistence identically 0)");
}

struct ClosedFormLaw {
    double lo = 0.0;  // support of the lower edge's law
    double hi = 0.0;
    bool available = false;
};

ClosedFormLaw closed_form_law(const DynamicsSpec& dynamics) {
    ClosedFormLaw law;
    if (!dynamics.drift.degenerate()) return law;
    const auto* os = std::get_if<OrderStatsUniform>(&dynamics.base);
    if (os == nullptr || os->a == os->b) return law;
    double shift = dynamics.drift.sample_point();
    law.lo = os->a + shift;
    law.hi = os->b + shift;
    law.available = true;
    return law;
}

// psi for the order-statistics base: with u the position of z inside the
// support, psi(z) = w ((1-u)^3 - u^3) / 3, extended linearly outside.
double closed_psi(const ClosedFormLaw& law, double z) {
    double w = law.hi - law.lo;
    if (z <= law.lo) return law.lo + w / 3.0 - z;
    if (z >= law.hi) return law.lo + 2.0 * w / 3.0 - z;
    double u = (z - law.lo) / w;
    double a = 1.0 - u;
    return w * (a * a * a - u * u * u) / 3.0;
}

double closed_variance_at(const ClosedFormLaw& law, double z) {
    double w = law.hi - law.lo;
    double u = std::clamp((z - law.lo) / w, 0.0, 1.0);
    double a = 1.0 - u;
    double inside = (a * a * a * a + u * u * u * u) / 6.0;
    // outside the support the projection error picks up the full offset
    if (z < law.lo) {
        double d = law.lo - z;
        return w * w / 6.0 + 2.0 * d * w / 3.0 + d * d;
    }
    if (z > law.hi) {
        double d = z - law.hi;
        return w * w / 6.0 + 2.0 * d * w / 3.0 + d * d;
    }
    return w * w * inside;
}

double closed_curvature_at(const ClosedFormLaw& law, double z) {
    double w = law.hi - law.lo;
    double u = std::clamp((z - law.lo) / w, 0.0, 1.0);
    double a = 1.0 - u;
    return 2.0 * (a * a + u * u);
}

std::vector<Interval> draw_common(const DynamicsSpec& dynamics, long n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("anchor: n_samples must be >= 2");
    Rng rng = Rng::stream(seed, 0);
    std::vector<Interval> draws(static_cast<std::size_t>(n));
    for (auto& iv : draws) iv = sample_interval(dynamics, 0.0, rng);
    return draws;
}

BalanceEstimate mc_psi(const std::vector<Interval>& draws, double z) {
    std::size_t n = draws.size();
    auto term = [z](const Interval& iv) {
        if (iv.lo > z) return iv.lo - z;
        if (iv.hi < z) return iv.hi - z;
        return 0.0;
    };
    double mean = pairwise_sum(draws.data(), 0, n, term) / static_cast<double>(n);
    double ss = pairwise_sum(draws.data(), 0, n, [&](const Interval& iv) {
                    double d = term(iv) - mean;
                    return d * d;
                }) /
                static_cast<double>(n);
    BalanceEstimate est;
    est.value = mean;
    est.std_error = std::sqrt(ss / static_cast<double>(n));
    est.closed_form = false;
    return est;
}

}  // namespace

BalanceEstimate balance_residual(const DynamicsSpec& dynamics, double z, long n_samples,
                                 std::uint64_t seed) {
    require_exogenous(dynamics, "balance_residual");
    ClosedFormLaw law = closed_form_law(dynamics);
    if (law.available) return BalanceEstimate{closed_psi(law, z), 0.0, true};
    return mc_psi(draw_common(dynamics, n_samples, seed), z);
}

SelfConsistencyReport self_consistency_check(const DynamicsSpec& dynamics, double z,
                                             long n_samples, std::uint64_t seed) {
    require_exogenous(dynamics, "self_consistency_check");
    auto draws = draw_common(dynamics, n_samples, seed);
    std::size_t n = draws.size();
    double mean = pairwise_sum(draws.data(), 0, n,
                               [z](const Interval& iv) { return project(iv, z); }) /
                  static_cast<double>(n);
    double ss = pairwise_sum(draws.data(), 0, n, [&](const Interval& iv) {
                    double d = project(iv, z) - mean;
                    return d * d;
                }) /
                static_cast<double>(n);
    SelfConsistencyReport report;
    report.gap = std::abs(z - mean);
    report.std_error = std::sqrt(ss / static_cast<double>(n));
    return report;
}

AnchorSolution solve_anchor(const DynamicsSpec& dynamics, double tol, long n_samples,
                            std::uint64_t seed) {
    require_exogenous(dynamics, "solve_anchor");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_anchor: tol must be > 0");

    AnchorSolution sol;
    ClosedFormLaw law = closed_form_law(dynamics);

    std::vector<Interval> draws;
    double lo, hi;
    std::function<double(double)> psi;
    if (law.available) {
        lo = law.lo;
        hi = law.hi;
        psi = [&law](double z) { return closed_psi(law, z); };
    } else {
        draws = draw_common(dynamics, n_samples, seed);
        lo = draws[0].lo;
        hi = draws[0].hi;
        double max_lo = draws[0].lo, min_hi = draws[0].hi;
        for (const auto& iv : draws) {
            lo = std::min(lo, iv.lo);
            hi = std::max(hi, iv.hi);
            max_lo = std::max(max_lo, iv.lo);
            min_hi = std::min(min_hi, iv.hi);
        }
        if (max_lo < min_hi) {
            // every draw contains [max_lo, min_hi]: psi vanishes there
            sol.flat_interval = Interval{max_lo, min_hi};
            sol.z_star = 0.5 * (max_lo + min_hi);
            sol.variance_at_z = 0.0;
            sol.balance_at_z = 0.0;
            sol.curvature_at_z = 0.0;
            sol.converged = true;
            sol.diagnostics = "flat balance region; midpoint returned";
            return sol;
        }
        psi = [&draws](double z) { return mc_psi(draws, z).value; };
    }

    double f_lo = psi(lo), f_hi = psi(hi);
    if (!(f_lo >= 0.0 && f_hi <= 0.0)) {
        sol.converged = false;
        sol.diagnostics = "no sign change across the sampled interval range";
        sol.z_star = 0.5 * (lo + hi);
        sol.balance_at_z = psi(sol.z_star);
        return sol;
    }

    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        z = 0.5 * (lo + hi);
        double f = psi(z);
        if (std::abs(f) < tol) break;
        (f > 0.0 ? lo : hi) = z;
        if (hi - lo <= 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
    }
    sol.z_star = z;
    sol.balance_at_z = psi(z);
    sol.converged = std::abs(sol.balance_at_z) < tol;
    if (!sol.converged) sol.diagnostics = "bisection stalled before reaching tol";

    if (law.available) {
        sol.variance_at_z = closed_variance_at(law, z);
        sol.curvature_at_z = closed_curvature_at(law, z);
    } else {
        std::size_t n = draws.size();
        sol.variance_at_z = pairwise_sum(draws.data(), 0, n, [z](const Interval& iv) {
                                double d = project(iv, z) - z;
                                return d * d;
                            }) /
                            static_cast<double>(n);
        long outside = 0;
        for (const auto& iv : draws)
            if (z <= iv.lo || z >= iv.hi) ++outside;
        sol.curvature_at_z = 2.0 * static_cast<double>(outside) / static_cast<double>(n);
    }
    return sol;
}

}  // namespace refrule
