#pragma once

#include <cstddef>
#include <functional>

namespace refrule {

// Pairwise (cascade) summation of fn(data[i]) for i in [lo, hi). Error grows
// like log(n) instead of n, and the bracketing is a pure function of the
// index range, so totals are reproducible for a fixed input order.
template <typename T, typename Fn>
double pairwise_sum(const T* data, std::size_t lo, std::size_t hi, Fn&& fn) {
    std::size_t n = hi - lo;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += fn(data[i]);
        return s;
    }
    std::size_t mid = lo + n / 2;
    return pairwise_sum(data, lo, mid, fn) + pairwise_sum(data, mid, hi, fn);
}

template <typename T>
double pairwise_sum(const T* data, std::size_t n) {
    return pairwise_sum(data, 0, n, [](T x) { return static_cast<double>(x); });
}

// Compensated running sum for quantities accumulated step by step, where a
// buffer for pairwise summation is not available.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace refrule
