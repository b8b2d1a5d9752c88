#pragma once

#include <string>
#include <utility>
#include <variant>

#include "refrule/rng.hpp"

namespace refrule {

// Scalar noise law for the persistence and drift coefficients.
struct ScalarDist {
    enum class Kind { Constant, Uniform, Normal, TwoPoint };

    Kind kind = Kind::Constant;
    // Parameter slots by kind:
    //   Constant: p0 = value
    //   Uniform:  p0 = lower, p1 = upper
    //   Normal:   p0 = mean,  p1 = sd
    //   TwoPoint: p0 = x1, p1 = prob of x1, p2 = x2
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    static ScalarDist constant(double c);
    static ScalarDist uniform(double a, double b);
    static ScalarDist normal(double mean, double sd);
    static ScalarDist two_point(double x1, double prob1, double x2);

    double sample(Rng& rng) const;
    bool is_constant(double value) const;
    bool degenerate() const;   // carries no randomness
    double sample_point() const;  // the single outcome of a degenerate law

    // E|X|^p is available in closed form for Constant and Uniform.
    bool has_closed_abs_moment() const;
    double abs_moment(double p) const;
};

// Validates parameters; throws std::invalid_argument naming the problem.
void validate(const ScalarDist& d);
std::string to_config_string(const ScalarDist& d);

// Law of the base interval [U, V] with U <= V almost surely.
struct OrderStatsUniform {
    double a = 0.0;
    double b = 1.0;
};

struct IndependentSorted {
    ScalarDist first;
    ScalarDist second;
};

struct FixedWidth {
    ScalarDist center;
    double width = 0.0;
};

using BaseIntervalDist = std::variant<OrderStatsUniform, IndependentSorted, FixedWidth>;

std::pair<double, double> sample_base(const BaseIntervalDist& base, Rng& rng);
void validate(const BaseIntervalDist& base);
std::string to_config_string(const BaseIntervalDist& base);

}  // namespace refrule
