#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "refrule/interval.hpp"

namespace refrule {

// Picks the point a fixed fraction of the way across the interval.
// k = 0.5 is the midpoint rule.
struct ConvexCombination {
    double k = 0.5;
};

// Projects a fixed target onto the interval.
struct Anchor {
    double target = 0.0;
};

// Projects the previous action onto the interval (move only when forced).
struct StatusQuo {};

// Projects r(prev) onto the interval, with r given by a piecewise-linear
// table over a strictly increasing grid. Queries outside the grid clamp to
// the nearest endpoint's value.
struct TabulatedReference {
    std::vector<double> grid;
    std::vector<double> targets;

    double interp(double s) const;
};

using Policy = std::variant<ConvexCombination, Anchor, StatusQuo, TabulatedReference>;

Policy midpoint_rule();

double apply(const Policy& policy, double prev_action, const Interval& iv);

// The unprojected reference point r(prev), for policies that are reference
// rules. ConvexCombination reads the interval rather than the history, so it
// has no reference point.
std::optional<double> target_of(const Policy& policy, double prev_action);

void validate(const Policy& policy);
std::string to_config_string(const Policy& policy);

struct NonexpansiveReport {
    bool monotone_ok = true;      // targets nondecreasing along the grid
    bool nonexpansive_ok = true;  // increments never exceed the grid steps
    double max_slope = 0.0;
    std::vector<std::string> violations;

    bool ok() const { return monotone_ok && nonexpansive_ok; }
};

// Verifies 0 <= r(s_{i+1}) - r(s_i) <= (s_{i+1} - s_i) * (1 + 1e-6) on the
// table's own grid.
NonexpansiveReport check_nonexpansive(const TabulatedReference& table);

}  // namespace refrule
