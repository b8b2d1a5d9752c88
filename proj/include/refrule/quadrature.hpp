#pragma once

#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace refrule {

// Adaptive Gauss-Kronrod integration over [a, b]. Tight enough that the
// result can serve as an independent check on closed-form values; refuses
// to return a value whose error estimate exceeds the requested bound.
template <typename F>
double integrate(F&& f, double a, double b, double target_abs_error = 1e-10) {
    double error = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, /*max_depth=*/15, /*tol=*/1e-12, &error);
    if (!(error <= target_abs_error))
        throw std::runtime_error("integrate: requested accuracy not reached");
    return value;
}

}  // namespace refrule
