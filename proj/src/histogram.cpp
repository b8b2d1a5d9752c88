#include "refrule/histogram.hpp"

#include <algorithm>

namespace refrule {

double Histogram::total_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

double Histogram::cdf(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (edges[i + 1] <= x) {
            s += masses[i];
        } else if (edges[i] < x) {
            double w = edges[i + 1] - edges[i];
            if (w > 0.0) s += masses[i] * (x - edges[i]) / w;
        }
    }
    for (const auto& a : atoms)
        if (a.location <= x) s += a.mass;
    return s;
}

}  // namespace refrule
