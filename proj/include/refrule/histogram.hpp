#pragma once

#include <vector>

namespace refrule {

// Empirical law of the stationary action: uniform bins over the observed
// range plus point masses for exactly repeated values. Bin masses exclude
// the atom samples, so bin masses and atom masses together sum to one.
struct Histogram {
    struct Atom {
        double location = 0.0;
        double mass = 0.0;
    };

    std::vector<double> edges;   // size bins + 1
    std::vector<double> masses;  // size bins
    std::vector<Atom> atoms;     // sorted by location

    double total_mass() const;
    // Mass at or below x: cumulative bins whose right edge is <= x, plus
    // atoms at or below x, plus the partial bin containing x.
    double cdf(double x) const;
};

}  // namespace refrule
