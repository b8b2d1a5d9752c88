#pragma once

#include <string>
#include <variant>
#include <vector>

namespace refrule {

// Per-period adjustment costs c(x, y): previous action x, new action y.
struct Quadratic {};

struct PseudoHuber {
    double delta = 1.0;
};

struct AsymmetricQuadratic {
    double lambda_minus = 1.0;  // weight on downward moves (y < x)
    double lambda_plus = 1.0;   // weight on upward moves
};

// Penalizes distance to a fixed point instead of the size of the move. It
// charges for standing still away from `point`, so it sits outside the
// family the axioms describe; it exists for variance-style objectives.
struct SquaredDistanceTo {
    double point = 0.0;
};

using CostFn = std::variant<Quadratic, PseudoHuber, AsymmetricQuadratic, SquaredDistanceTo>;

double eval(const CostFn& cost, double x, double y);
bool is_translation_invariant(const CostFn& cost);
void validate(const CostFn& cost);
std::string to_config_string(const CostFn& cost);

struct CostAxiomReport {
    bool inaction_ok = true;   // c(x, x) == 0 for every grid x
    bool monotone_ok = true;   // c(x, .) nondecreasing in the distance from x
    bool convex_ok = true;     // c(x, .) convex along the grid
    std::vector<std::string> violations;

    bool ok() const { return inaction_ok && monotone_ok && convex_ok; }
};

// Checks the cost axioms on the cross product grid x grid. Violations are
// reported, not thrown, and name the offending points.
CostAxiomReport check_axioms(const CostFn& cost, const std::vector<double>& grid);

}  // namespace refrule
