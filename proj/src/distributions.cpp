#include "refrule/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace refrule {

ScalarDist ScalarDist::constant(double c) {
    ScalarDist d;
    d.kind = Kind::Constant;
    d.p0 = c;
    validate(d);
    return d;
}

ScalarDist ScalarDist::uniform(double a, double b) {
    ScalarDist d;
    d.kind = Kind::Uniform;
    d.p0 = a;
    d.p1 = b;
    validate(d);
    return d;
}

ScalarDist ScalarDist::normal(double mean, double sd) {
    ScalarDist d;
    d.kind = Kind::Normal;
    d.p0 = mean;
    d.p1 = sd;
    validate(d);
    return d;
}

ScalarDist ScalarDist::two_point(double x1, double prob1, double x2) {
    ScalarDist d;
    d.kind = Kind::TwoPoint;
    d.p0 = x1;
    d.p1 = prob1;
    d.p2 = x2;
    validate(d);
    return d;
}

double ScalarDist::sample(Rng& rng) const {
    switch (kind) {
        case Kind::Constant: return p0;
        case Kind::Uniform: return rng.uniform(p0, p1);
        case Kind::Normal: return rng.normal(p0, p1);
        case Kind::TwoPoint: return rng.uniform01() < p1 ? p0 : p2;
    }
    return p0;
}

bool ScalarDist::is_constant(double value) const {
    return degenerate() && sample_point() == value;
}

bool ScalarDist::degenerate() const {
    switch (kind) {
        case Kind::Constant: return true;
        case Kind::Uniform: return p0 == p1;
        case Kind::Normal: return p1 == 0.0;
        case Kind::TwoPoint: return p0 == p2 || p1 == 0.0 || p1 == 1.0;
    }
    return false;
}

bool ScalarDist::has_closed_abs_moment() const {
    return kind == Kind::Constant || kind == Kind::Uniform;
}

double ScalarDist::abs_moment(double p) const {
    if (kind == Kind::Constant) return std::pow(std::abs(p0), p);
    if (kind != Kind::Uniform) throw std::logic_error("abs_moment: no closed form for this law");
    double a = p0, b = p1;
    if (a == b) return std::pow(std::abs(a), p);
    // integral of |x|^p over [a,b], divided by the length
    auto piece = [p](double t) { return std::pow(std::abs(t), p + 1.0) / (p + 1.0); };
    double integral;
    if (a >= 0.0) {
        integral = piece(b) - piece(a);
    } else if (b <= 0.0) {
        integral = piece(a) - piece(b);
    } else {
        integral = piece(a) + piece(b);
    }
    return integral / (b - a);
}

double ScalarDist::sample_point() const {
    switch (kind) {
        case Kind::Constant: return p0;
        case Kind::Uniform: return p0;  // degenerate: p0 == p1
        case Kind::Normal: return p0;
        case Kind::TwoPoint: return p1 == 0.0 ? p2 : p0;
    }
    return p0;
}

void validate(const ScalarDist& d) {
    using Kind = ScalarDist::Kind;
    auto finite = [](double x) { return std::isfinite(x); };
    switch (d.kind) {
        case Kind::Constant:
            if (!finite(d.p0)) throw std::invalid_argument("const: value must be finite");
            break;
        case Kind::Uniform:
            if (!finite(d.p0) || !finite(d.p1)) throw std::invalid_argument("uniform: bounds must be finite");
            if (d.p0 > d.p1) throw std::invalid_argument("uniform: requires lower <= upper");
            break;
        case Kind::Normal:
            if (!finite(d.p0) || !finite(d.p1)) throw std::invalid_argument("normal: parameters must be finite");
            if (d.p1 < 0.0) throw std::invalid_argument("normal: sd must be >= 0");
            break;
        case Kind::TwoPoint:
            if (!finite(d.p0) || !finite(d.p1) || !finite(d.p2))
                throw std::invalid_argument("twopoint: parameters must be finite");
            if (d.p1 < 0.0 || d.p1 > 1.0) throw std::invalid_argument("twopoint: probability must lie in [0,1]");
            break;
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

std::string to_config_string(const ScalarDist& d) {
    using Kind = ScalarDist::Kind;
    switch (d.kind) {
        case Kind::Constant: return "const(" + fmt(d.p0) + ")";
        case Kind::Uniform: return "uniform(" + fmt(d.p0) + "," + fmt(d.p1) + ")";
        case Kind::Normal: return "normal(" + fmt(d.p0) + "," + fmt(d.p1) + ")";
        case Kind::TwoPoint: return "twopoint(" + fmt(d.p0) + "," + fmt(d.p1) + "," + fmt(d.p2) + ")";
    }
    return "";
}

std::pair<double, double> sample_base(const BaseIntervalDist& base, Rng& rng) {
    if (const auto* os = std::get_if<OrderStatsUniform>(&base)) {
        double x = rng.uniform(os->a, os->b);
        double y = rng.uniform(os->a, os->b);
        return x <= y ? std::make_pair(x, y) : std::make_pair(y, x);
    }
    if (const auto* is = std::get_if<IndependentSorted>(&base)) {
        double x = is->first.sample(rng);
        double y = is->second.sample(rng);
        return x <= y ? std::make_pair(x, y) : std::make_pair(y, x);
    }
    const auto& fw = std::get<FixedWidth>(base);
    double c = fw.center.sample(rng);
    double h = 0.5 * fw.width;
    return {c - h, c + h};
}

void validate(const BaseIntervalDist& base) {
    if (const auto* os = std::get_if<OrderStatsUniform>(&base)) {
        if (!std::isfinite(os->a) || !std::isfinite(os->b))
            throw std::invalid_argument("orderstats: bounds must be finite");
        if (os->a > os->b) throw std::invalid_argument("orderstats: requires lower <= upper");
        return;
    }
    if (const auto* is = std::get_if<IndependentSorted>(&base)) {
        validate(is->first);
        validate(is->second);
        return;
    }
    const auto& fw = std::get<FixedWidth>(base);
    validate(fw.center);
    if (!std::isfinite(fw.width) || fw.width < 0.0)
        throw std::invalid_argument("width: interval width must be >= 0");
}

std::string to_config_string(const BaseIntervalDist& base) {
    if (const auto* os = std::get_if<OrderStatsUniform>(&base))
        return "orderstats(" + fmt(os->a) + "," + fmt(os->b) + ")";
    if (const auto* is = std::get_if<IndependentSorted>(&base))
        return "sorted(" + to_config_string(is->first) + ";" + to_config_string(is->second) + ")";
    const auto& fw = std::get<FixedWidth>(base);
    return "width(" + to_config_string(fw.center) + ";" + fmt(fw.width) + ")";
}

}  // namespace refrule
