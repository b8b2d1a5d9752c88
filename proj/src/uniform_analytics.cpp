#include "refrule/uniform_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace refrule {

namespace {

void require_unit(double x, const char* who) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(who) + ": x must lie in [0,1]");
}

}  // namespace

double density_midpoint(double x) {
    require_unit(x, "density_midpoint");
    return x <= 0.5 ? 4.0 * x : 4.0 * (1.0 - x);
}

AnchorLaw density_anchor(double x) {
    require_unit(x, "density_anchor");
    return AnchorLaw{2.0 * std::min(x, 1.0 - x), 0.5};
}

double density_inertia(double x) {
    require_unit(x, "density_inertia");
    double q = 1.0 - 2.0 * x + 2.0 * x * x;
    return 2.0 * x * (1.0 - x) / (q * q);
}

double conditional_qv_inertia(double x) {
    require_unit(x, "conditional_qv_inertia");
    double a = x * x, b = (1.0 - x) * (1.0 - x);
    return (a * a + b * b) / 6.0;
}

UniformBenchmarkTable analytic_table() {
    constexpr double pi = std::numbers::pi;
    return UniformBenchmarkTable{
        1.0 / 12.0,            // qv_midpoint
        1.0 / 24.0,            // var_midpoint
        1.0 / 24.0,            // qv_anchor
        1.0 / 48.0,            // var_anchor
        pi / 12.0 - 2.0 / 9.0, // qv_inertia
        (pi - 3.0) / 4.0,      // var_inertia
    };
}

double cdf(UniformLaw law, double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("cdf: point outside the unit interval");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    switch (law) {
        case UniformLaw::Midpoint:
            return x <= 0.5 ? 2.0 * x * x : 1.0 - 2.0 * (1.0 - x) * (1.0 - x);
        case UniformLaw::Anchor:
            // tent density below the center; the atom enters at x = 1/2
            return x < 0.5 ? x * x : 2.0 * x - x * x;
        case UniformLaw::Inertia:
            return x * x / (1.0 - 2.0 * x + 2.0 * x * x);
    }
    return 0.0;
}

double ks_distance(const Histogram& hist, UniformLaw law) {
    if (hist.edges.size() < 2) throw std::invalid_argument("ks_distance: empty histogram");
    double worst = 0.0;
    double cum = 0.0;
    std::size_t next_atom = 0;
    const auto& atoms = hist.atoms;
    auto take_atoms_below = [&](double edge) {
        while (next_atom < atoms.size() && atoms[next_atom].location <= edge)
            cum += atoms[next_atom++].mass;
    };
    take_atoms_below(hist.edges[0]);
    worst = std::abs(cum - cdf(law, hist.edges[0]));
    for (std::size_t i = 0; i < hist.masses.size(); ++i) {
        cum += hist.masses[i];
        take_atoms_below(hist.edges[i + 1]);
        worst = std::max(worst, std::abs(cum - cdf(law, hist.edges[i + 1])));
    }
    return worst;
}

}  // namespace refrule
