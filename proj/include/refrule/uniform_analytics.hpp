#pragma once

#include "refrule/histogram.hpp"

namespace refrule {

// Closed-form stationary laws on the canonical uniform benchmark, one per
// built-in rule family. All throw std::domain_error outside the unit
// interval.

// Midpoint rule: triangular density peaking at 1/2.
double density_midpoint(double x);

struct AnchorLaw {
    double continuous_density = 0.0;  // tent function 2*min(x, 1-x)
    double atom_mass_at_center = 0.5;
};
// Central anchor rule: continuous part plus a point mass 1/2 at x = 1/2.
AnchorLaw density_anchor(double x);

// Status quo rule: smooth stationary density of the inert process.
double density_inertia(double x);

// Expected squared one-step move of the status quo rule given the current
// action x.
double conditional_qv_inertia(double x);

struct UniformBenchmarkTable {
    double qv_midpoint;
    double var_midpoint;
    double qv_anchor;
    double var_anchor;
    double qv_inertia;
    double var_inertia;
};
// The six stationary moments of the benchmark (quadratic variation and
// variance per rule family), in closed form.
UniformBenchmarkTable analytic_table();

enum class UniformLaw { Midpoint, Anchor, Inertia };

double cdf(UniformLaw law, double x);

// Sup distance between the empirical CDF of a simulated histogram
// (bins plus atoms) and the analytic law, evaluated at the bin edges.
double ks_distance(const Histogram& hist, UniformLaw law);

}  // namespace refrule
