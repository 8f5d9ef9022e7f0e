#pragma once

#include <cmath>
#include <numbers>

namespace lvasym {

/// Standard normal density.
inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

/// Cumulative normal N(x) = erfc(-x/sqrt(2))/2; erfc keeps full relative accuracy in the left tail.
inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace lvasym
