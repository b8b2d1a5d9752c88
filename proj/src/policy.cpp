#include "refrule/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace refrule {

double TabulatedReference::interp(double s) const {
    if (s <= grid.front()) return targets.front();
    if (s >= grid.back()) return targets.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), s);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    double s0 = grid[i - 1], s1 = grid[i];
    double w = (s - s0) / (s1 - s0);
    return targets[i - 1] + w * (targets[i] - targets[i - 1]);
}

Policy midpoint_rule() { return ConvexCombination{0.5}; }

double apply(const Policy& policy, double prev_action, const Interval& iv) {
    if (const auto* c = std::get_if<ConvexCombination>(&policy))
        return (1.0 - c->k) * iv.lo + c->k * iv.hi;
    if (const auto* a = std::get_if<Anchor>(&policy)) return project(iv, a->target);
    if (std::holds_alternative<StatusQuo>(policy)) return project(iv, prev_action);
    const auto& t = std::get<TabulatedReference>(policy);
    return project(iv, t.interp(prev_action));
}

std::optional<double> target_of(const Policy& policy, double prev_action) {
    if (std::holds_alternative<ConvexCombination>(policy)) return std::nullopt;
    if (const auto* a = std::get_if<Anchor>(&policy)) return a->target;
    if (std::holds_alternative<StatusQuo>(policy)) return prev_action;
    return std::get<TabulatedReference>(policy).interp(prev_action);
}

void validate(const Policy& policy) {
    if (const auto* c = std::get_if<ConvexCombination>(&policy)) {
        if (!(c->k >= 0.0 && c->k <= 1.0))
            throw std::invalid_argument("combo: k must lie in [0,1]");
        return;
    }
    if (const auto* a = std::get_if<Anchor>(&policy)) {
        if (!std::isfinite(a->target)) throw std::invalid_argument("anchor: target must be finite");
        return;
    }
    if (std::holds_alternative<StatusQuo>(policy)) return;
    const auto& t = std::get<TabulatedReference>(policy);
    if (t.grid.size() < 2) throw std::invalid_argument("table: needs at least 2 grid points");
    if (t.grid.size() != t.targets.size())
        throw std::invalid_argument("table: grid and target columns differ in length");
    for (std::size_t i = 0; i + 1 < t.grid.size(); ++i)
        if (!(t.grid[i] < t.grid[i + 1]))
            throw std::invalid_argument("table: grid must be strictly increasing");
    for (double v : t.grid)
        if (!std::isfinite(v)) throw std::invalid_argument("table: grid values must be finite");
    for (double v : t.targets)
        if (!std::isfinite(v)) throw std::invalid_argument("table: target values must be finite");
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::string to_config_string(const Policy& policy) {
    if (const auto* c = std::get_if<ConvexCombination>(&policy)) {
        if (c->k == 0.5) return "mid";
        return "combo(" + fmt(c->k) + ")";
    }
    if (const auto* a = std::get_if<Anchor>(&policy)) return "anchor(" + fmt(a->target) + ")";
    if (std::holds_alternative<StatusQuo>(policy)) return "statusquo";
    const auto& t = std::get<TabulatedReference>(policy);
    return "table(<" + std::to_string(t.grid.size()) + " rows>)";
}

NonexpansiveReport check_nonexpansive(const TabulatedReference& table) {
    validate(Policy{table});
    NonexpansiveReport report;
    const double slack = 1.0 + 1e-6;
    for (std::size_t i = 0; i + 1 < table.grid.size(); ++i) {
        double ds = table.grid[i + 1] - table.grid[i];
        double dr = table.targets[i + 1] - table.targets[i];
        double slope = dr / ds;
        report.max_slope = std::max(report.max_slope, slope);
        if (dr < 0.0) {
            report.monotone_ok = false;
            report.violations.push_back("monotone: target drops after s = " + fmt(table.grid[i]));
        }
        if (dr > ds * slack) {
            report.nonexpansive_ok = false;
            report.violations.push_back("nonexpansive: slope " + fmt(slope) + " after s = " +
                                        fmt(table.grid[i]));
        }
    }
    return report;
}

}  // namespace refrule
