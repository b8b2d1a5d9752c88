#include "refrule/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace refrule {

double eval(const CostFn& cost, double x, double y) {
    if (std::holds_alternative<Quadratic>(cost)) {
        double d = y - x;
        return d * d;
    }
    if (const auto* h = std::get_if<PseudoHuber>(&cost)) {
        double r = (y - x) / h->delta;
        return h->delta * h->delta * (std::sqrt(1.0 + r * r) - 1.0);
    }
    if (const auto* a = std::get_if<AsymmetricQuadratic>(&cost)) {
        double d = y - x;
        return (d < 0.0 ? a->lambda_minus : a->lambda_plus) * d * d;
    }
    const auto& s = std::get<SquaredDistanceTo>(cost);
    double d = y - s.point;
    return d * d;
}

bool is_translation_invariant(const CostFn& cost) {
    return !std::holds_alternative<SquaredDistanceTo>(cost);
}

void validate(const CostFn& cost) {
    if (const auto* h = std::get_if<PseudoHuber>(&cost)) {
        if (!(h->delta > 0.0)) throw std::invalid_argument("huber: delta must be > 0");
        return;
    }
    if (const auto* a = std::get_if<AsymmetricQuadratic>(&cost)) {
        if (!(a->lambda_minus > 0.0) || !(a->lambda_plus > 0.0))
            throw std::invalid_argument("asym: both weights must be > 0");
        return;
    }
    if (const auto* s = std::get_if<SquaredDistanceTo>(&cost)) {
        if (!std::isfinite(s->point)) throw std::invalid_argument("sqdist: point must be finite");
    }
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::string to_config_string(const CostFn& cost) {
    if (std::holds_alternative<Quadratic>(cost)) return "quad";
    if (const auto* h = std::get_if<PseudoHuber>(&cost)) return "huber(" + fmt(h->delta) + ")";
    if (const auto* a = std::get_if<AsymmetricQuadratic>(&cost))
        return "asym(" + fmt(a->lambda_minus) + "," + fmt(a->lambda_plus) + ")";
    const auto& s = std::get<SquaredDistanceTo>(cost);
    return "sqdist(" + fmt(s.point) + ")";
}

CostAxiomReport check_axioms(const CostFn& cost, const std::vector<double>& grid) {
    validate(cost);
    if (grid.size() < 3) throw std::invalid_argument("check_axioms: grid needs at least 3 points");
    std::vector<double> ys = grid;
    std::sort(ys.begin(), ys.end());

    CostAxiomReport report;
    auto note = [&report](const std::string& msg) { report.violations.push_back(msg); };

    double scale = 0.0;
    for (double x : ys)
        for (double y : ys) scale = std::max(scale, std::abs(eval(cost, x, y)));
    double tol = 1e-8 * std::max(scale, 1.0);

    for (double x : ys) {
        if (std::abs(eval(cost, x, x)) > tol) {
            report.inaction_ok = false;
            note("inaction: c(x,x) != 0 at x = " + fmt(x));
        }
    }
    for (double x : ys) {
        // nondecreasing to the right of x, nonincreasing to its left
        for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
            double y1 = ys[i], y2 = ys[i + 1];
            double c1 = eval(cost, x, y1), c2 = eval(cost, x, y2);
            if (y1 >= x && c2 < c1 - tol) {
                report.monotone_ok = false;
                note("monotone: decreasing beyond x = " + fmt(x) + " between y = " + fmt(y1) +
                     " and " + fmt(y2));
            }
            if (y2 <= x && c1 < c2 - tol) {
                report.monotone_ok = false;
                note("monotone: decreasing below x = " + fmt(x) + " between y = " + fmt(y1) +
                     " and " + fmt(y2));
            }
        }
        for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
            double yl = ys[i - 1], ym = ys[i], yr = ys[i + 1];
            double wl = yr - ym, wr = ym - yl;  // chord weights for uneven spacing
            if (wl <= 0.0 || wr <= 0.0) continue;
            double chord = (wl * eval(cost, x, yl) + wr * eval(cost, x, yr)) / (wl + wr);
            if (eval(cost, x, ym) > chord + tol) {
                report.convex_ok = false;
                note("convex: chord test fails at x = " + fmt(x) + ", y = " + fmt(ym));
            }
        }
    }
    return report;
}

}  // namespace refrule
