#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace lexo {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
inline double log_add(double a, double b) noexcept {
    if (a < b) std::swap(a, b);
    if (b == kLogZero) return a;
    return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> xs) noexcept {
    if (xs.empty()) return kLogZero;
    const double peak = *std::max_element(xs.begin(), xs.end());
    if (peak == kLogZero) return kLogZero;
    if (std::isinf(peak)) return peak;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - peak);
    return peak + std::log(acc);
}

} // namespace lexo
