#pragma once

/// @file kernel.hpp
/// @brief Short-time approximate Green's functions of order 0, 1 and 2.
///
/// The order-n kernel is built in the parabolically rescaled frame about a
/// basepoint z (coefficients frozen at (0, z)) and mapped back to physical
/// variables: x - z -> (x - z)/sqrt(t), x - y -> (x - y)/sqrt(t), with the
/// overall t^{-1/2} Jacobian absorbed into the physical Gaussian.
///
/// Underflow policy: whenever (x-y)^2 / (2 t a^2) > 745 the kernel is
/// returned as exactly 0, since exp() underflows in double precision there.

#include <cmath>
#include <limits>
#include <numbers>

#include "lvasym/errors.hpp"
#include "lvasym/hermite.hpp"
#include "lvasym/models.hpp"

namespace lvasym {

inline constexpr double kUnderflowExponent = 745.0;

struct KernelSpec {
    Model model;
    int order = 2;
    BasepointRule basepoint = BasepointRule::AtX;
};

namespace detail {

inline void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time t must be > 0");
}

inline void check_order(int order) {
    if (order < 0 || order > 2) throw DomainError("kernel order must be 0, 1 or 2");
}

}  // namespace detail

/// Frozen-coefficient Gaussian (2 pi t a^2)^{-1/2} exp(-(x-y)^2 / (2 t a^2)).
inline double g0(const CoefficientJet& jet, double t, double x, double y) {
    detail::check_time(t);
    const double var = t * jet.a * jet.a;
    const double d = x - y;
    const double expo = d * d / (2.0 * var);
    if (expo > kUnderflowExponent) return 0.0;
    return std::exp(-expo) / std::sqrt(2.0 * std::numbers::pi * var);
}

/// Order-1 kernel at an arbitrary basepoint z, jet evaluated at z:
///
///   G0 * [1 + (3aa' - 2b)/(2a^2) (x-y) - a'/(2ta^3) (x-y)^3
///          + a' (x-z) ((x-y)^2 - t a^2) / (t a^3)]
///
/// The last term comes from a a' (x-z) H_2 and carries the factor a'; it
/// vanishes at z = x.
inline double g1_general(const CoefficientJet& jet, double t, double x, double y, double z) {
    const double gauss = g0(jet, t, x, y);
    if (gauss == 0.0) return 0.0;
    const double a = jet.a;
    const double ap = jet.da_dx;
    const double d = x - y;
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double bracket = 1.0 + (3.0 * a * ap - 2.0 * jet.b) / (2.0 * a2) * d -
                           ap / (2.0 * t * a3) * d * d * d +
                           ap * (x - z) * (d * d - t * a2) / (t * a3);
    return gauss * bracket;
}

/// Coefficient polynomials P_0..P_6 of the order-2 correction, evaluated at
/// the rescaled offset u = (x - z)/sqrt(t).
struct SecondOrderCoefficients {
    double p[7]{};
};

inline SecondOrderCoefficients second_order_coefficients(const CoefficientJet& j, double u) {
    const double a = j.a;
    const double ap = j.da_dx;
    const double app = j.d2a_dx2;
    const double b = j.b;
    const double bp = j.db_dx;
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double ap2 = ap * ap;
    const double u2 = u * u;

    SecondOrderCoefficients c;
    c.p[0] = j.c;
    c.p[1] = bp * u;
    c.p[2] = 0.5 * (0.5 * a3 * app + a2 * bp + 0.5 * a2 * ap2 + b * b + ap2 * u2 +
                    a * (b * ap + j.da_dt + app * u2));
    c.p[3] = a * u * (ap * b + 0.5 * a2 * app + 1.5 * a * ap2);
    c.p[4] = a2 / 3.0 * (0.5 * a3 * app + 2.0 * a2 * ap2 + 1.5 * a * ap * b + 1.5 * ap2 * u2);
    c.p[5] = 0.5 * a2 * a2 * ap2 * u;
    c.p[6] = 0.125 * a3 * a3 * ap2;
    return c;
}

/// Order-2 kernel at an arbitrary basepoint z:
/// G1 + t (P_0 + sum_i P_i H_i(Theta)) G0 with Theta = (x-y)/(sqrt(t) a^2).
inline double g2_general(const CoefficientJet& jet, double t, double x, double y, double z) {
    const double gauss = g0(jet, t, x, y);
    if (gauss == 0.0) return 0.0;
    const double first = g1_general(jet, t, x, y, z);
    const double sqrt_t = std::sqrt(t);
    const double u = (x - z) / sqrt_t;
    const double theta = (x - y) / (sqrt_t * jet.a * jet.a);
    const HermiteValues h = hermite(theta, jet.a);
    const SecondOrderCoefficients pc = second_order_coefficients(jet, u);
    double poly = pc.p[0];
    for (int k = 1; k <= 6; ++k) poly += pc.p[k] * h[static_cast<std::size_t>(k)];
    return first + t * poly * gauss;
}

namespace detail {

inline double kernel_with_jet(int order, const CoefficientJet& j, double t, double x, double y, double z) {
    switch (order) {
        case 0: return g0(j, t, x, y);
        case 1: return g1_general(j, t, x, y, z);
        default: return g2_general(j, t, x, y, z);
    }
}

}  // namespace detail

/// Approximate Green's function G_t^[n](x, y) for the given spec.
inline double kernel_eval(const KernelSpec& spec, double t, double x, double y) {
    detail::check_order(spec.order);
    detail::check_time(t);
    const double z = basepoint(spec.basepoint, x, y);
    return detail::kernel_with_jet(spec.order, jet(spec.model, z), t, x, y, z);
}

/// y -> G_t^[n](x, y) at fixed (t, x). For the AtX rule the jet is computed once.
class KernelRow {
public:
    KernelRow(const KernelSpec& spec, double t, double x) : spec_(&spec), t_(t), x_(x) {
        detail::check_order(spec.order);
        detail::check_time(t);
        if (spec.basepoint == BasepointRule::AtX) row_jet_ = jet(spec.model, x);
        else if (!(x > 0.0)) throw DomainError("kernel row requires x > 0");
    }

    double operator()(double y) const {
        if (spec_->basepoint == BasepointRule::AtX)
            return detail::kernel_with_jet(spec_->order, row_jet_, t_, x_, y, x_);
        const double z = basepoint(spec_->basepoint, x_, y);
        return detail::kernel_with_jet(spec_->order, jet(spec_->model, z), t_, x_, y, z);
    }

    [[nodiscard]] double x() const { return x_; }
    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] const KernelSpec& spec() const { return *spec_; }

    /// Kernel standard deviation a(0, x) sqrt(t) estimated from the jet at x.
    [[nodiscard]] double width() const {
        const double a = spec_->basepoint == BasepointRule::AtX ? row_jet_.a : jet(spec_->model, x_).a;
        return a * std::sqrt(t_);
    }

    /// Half-width beyond which the frozen Gaussian underflows. Only known for
    /// the AtX rule; other rules move the basepoint with y and report infinity.
    [[nodiscard]] double support_radius() const {
        if (spec_->basepoint != BasepointRule::AtX) return std::numeric_limits<double>::infinity();
        return std::sqrt(2.0 * kUnderflowExponent) * width();
    }

private:
    const KernelSpec* spec_;
    double t_;
    double x_;
    CoefficientJet row_jet_{};
};

}  // namespace lvasym
