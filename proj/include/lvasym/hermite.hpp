#pragma once

#include <array>
#include <cstddef>

#include "lvasym/errors.hpp"

namespace lvasym {

/// Rescaled Hermite polynomials H_0..H_6 at Theta for scale a.
///
/// They are the x-derivatives of the frozen Gaussian,
/// d_x^k exp(-(x-y)^2 / (2a^2)) = H_k(Theta) exp(...), Theta = (x-y)/a^2,
/// and satisfy H_0 = 1, H_{k+1} = -Theta H_k + H_k' / a^2.
struct HermiteValues {
    std::array<double, 7> h{};

    double operator[](std::size_t k) const { return h[k]; }
};

inline HermiteValues hermite(double theta, double a) {
    if (!(a > 0.0)) throw DomainError("hermite: scale a must be > 0");
    const double q = 1.0 / (a * a);  // 1/a^2
    const double q2 = q * q;
    const double q3 = q2 * q;
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double t4 = t2 * t2;
    HermiteValues v;
    v.h[0] = 1.0;
    v.h[1] = -theta;
    v.h[2] = t2 - q;
    v.h[3] = -t3 + 3.0 * theta * q;
    v.h[4] = t4 - 6.0 * t2 * q + 3.0 * q2;
    v.h[5] = -t4 * theta + 10.0 * t3 * q - 15.0 * theta * q2;
    v.h[6] = t4 * t2 - 15.0 * t4 * q + 45.0 * t2 * q2 - 15.0 * q3;
    return v;
}

}  // namespace lvasym
