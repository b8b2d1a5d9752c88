#pragma once

#include <algorithm>
#include <cmath>

namespace refrule {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo <= hi; }
    double width() const { return hi - lo; }
    double midpoint() const { return lo + 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

// Metric projection onto [lo, hi]: nearest feasible point.
inline double project(const Interval& iv, double x) {
    return std::min(std::max(x, iv.lo), iv.hi);
}

}  // namespace refrule
