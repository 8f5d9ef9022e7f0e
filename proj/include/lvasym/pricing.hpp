#pragma once

/// @file pricing.hpp
/// @brief Option values from the approximate kernels: closed forms at the
/// basepoint z = x, quadrature for any basepoint and payoff, puts by parity,
/// and finite-difference Greeks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "lvasym/errors.hpp"
#include "lvasym/grid.hpp"
#include "lvasym/kernel.hpp"
#include "lvasym/models.hpp"
#include "lvasym/payoff.hpp"
#include "lvasym/quadrature.hpp"
#include "lvasym/special.hpp"

namespace lvasym {

namespace detail {

inline void check_closed_order(int order) {
    if (order != 1 && order != 2) throw DomainError("order must be 1 or 2");
}

/// Call value integrated against the z = x kernel of order 1 or 2, from the
/// jet at x. Only the half line (K, inf) enters; the (-inf, 0) Gaussian tail
/// is ignored.
inline double call_from_jet(int order, const CoefficientJet& j, double t, double K, double x) {
    check_time(t);
    require(K > 0.0, "strike K must be > 0");
    const double a = j.a;
    const double ap = j.da_dx;
    const double D = x - K;
    const double s = a * std::sqrt(t);
    const double E = std::exp(-D * D / (2.0 * s * s));
    const double N = norm_cdf(D / s);
    const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

    double value = 0.5 * std::sqrt(t) * inv_sqrt_2pi * E * (2.0 * a - ap * D) + N * (j.b * t + D);
    if (order == 1) return value;

    const double a2 = a * a;
    const double ap2 = ap * ap;
    const double D2 = D * D;
    const double block = t * t * (a2 * j.d2a_dx2 / 12.0 + 0.5 * a * j.db_dx + j.c * a + 0.5 * j.da_dt - a * ap2 / 24.0 +
                                  j.b * j.b / (2.0 * a)) +
                         t * D2 * (j.d2a_dx2 / 6.0 - ap2 / (12.0 * a) + j.b * ap / (2.0 * a2)) +
                         ap2 * D2 * D2 / (8.0 * a2 * a);
    value += j.c * t * D * N + E * inv_sqrt_2pi / std::sqrt(t) * block;
    return value;
}

/// Full-line integral of the z = x kernel against y - K.
inline double forward_from_jet(int order, const CoefficientJet& j, double t, double K, double x) {
    const double D = x - K;
    double f = D + j.b * t;
    if (order == 2) f += j.c * t * D;
    return f;
}

}  // namespace detail

/// Closed-form call price U^[order](t, x) with basepoint z = x.
inline double price_call_closed(int order, const Model& model, double t, double K, double x) {
    detail::check_closed_order(order);
    return detail::call_from_jet(order, jet(model, x), t, K, x);
}

/// First-order CEV call with local volatility sigma x^alpha, written out in model parameters.
inline double price_call_cev_closed(double t, double K, double x, double sigma, double alpha, double r) {
    detail::check_time(t);
    detail::require(alpha > 0.0 && alpha <= 1.0, "CEV exponent alpha must satisfy 0 < alpha <= 1");
    detail::require(sigma > 0.0 && K > 0.0 && x > 0.0, "CEV inputs sigma, K, x must be > 0");
    const double xa = std::pow(x, alpha);
    const double D = x - K;
    const double gauss = std::exp(-D * D / (2.0 * sigma * sigma * t * xa * xa));
    const double pref = sigma * std::pow(x, alpha - 1.0) * std::sqrt(t) / (2.0 * std::sqrt(2.0 * std::numbers::pi));
    const double erf_part = 0.5 * (std::erf(D / (std::sqrt(2.0 * t) * sigma * xa)) + 1.0);
    return pref * gauss * ((2.0 - alpha) * x + alpha * K) + erf_part * ((1.0 + r * t) * x - K);
}

/// Put by parity: call minus the kernel's forward x - K + b t (+ c t (x - K) at order 2).
inline double price_put(int order, const Model& model, double t, double K, double x) {
    detail::check_closed_order(order);
    const CoefficientJet j = jet(model, x);
    return detail::call_from_jet(order, j, t, K, x) - detail::forward_from_jet(order, j, t, K, x);
}

/// Closed form for call, put and butterfly payoffs (butterfly by linearity).
inline double price_closed(int order, const Model& model, double t, const Payoff& payoff, double x) {
    detail::check_closed_order(order);
    const CoefficientJet j = jet(model, x);
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Call>) {
                return detail::call_from_jet(order, j, t, p.strike, x);
            } else if constexpr (std::is_same_v<T, Put>) {
                return detail::call_from_jet(order, j, t, p.strike, x) - detail::forward_from_jet(order, j, t, p.strike, x);
            } else if constexpr (std::is_same_v<T, Butterfly>) {
                const auto w = Payoff::butterfly_weights(p);
                return w[0] * detail::call_from_jet(order, j, t, p.k1, x) + w[1] * detail::call_from_jet(order, j, t, p.k, x) +
                       w[2] * detail::call_from_jet(order, j, t, p.k2, x);
            } else {
                throw DomainError("no closed form for a sampled payoff; use quadrature");
            }
        },
        payoff.variant());
}

struct QuadratureResult {
    double value = 0.0;
    /// Same integral on the half-step grid dx/2.
    double refined_value = 0.0;
    double richardson_defect = 0.0;
    /// Set when |value - refined_value| > 1e-6 (1 + |value|).
    bool grid_too_coarse = false;
};

namespace detail {

inline double quadrature_on(const KernelSpec& spec, double t, const Payoff& payoff, double x, const SpatialGrid& grid,
                            const QuadratureOptions& opt) {
    const std::vector<double> values = payoff.sample(grid);
    const KernelRow row(spec, t, x);
    return integrate_row(row, grid_function(grid, values, payoff), opt);
}

}  // namespace detail

/// Composite Simpson value of the integral of G_t(x, y) h(y) over the grid,
/// checked against the same rule on the half-step grid.
inline QuadratureResult price_quadrature(const KernelSpec& spec, double t, const Payoff& payoff, double x,
                                         const SpatialGrid& grid, const QuadratureOptions& opt = {}) {
    detail::check_order(spec.order);
    detail::require(x >= grid.x_min() && x <= grid.x_max(), "spot must lie within the grid");
    QuadratureResult res;
    res.value = detail::quadrature_on(spec, t, payoff, x, grid, opt);
    const SpatialGrid half(grid.x_min(), grid.x_max(), 0.5 * grid.dx());
    res.refined_value = detail::quadrature_on(spec, t, payoff, x, half, opt);
    res.richardson_defect = std::abs(res.value - res.refined_value);
    res.grid_too_coarse = res.richardson_defect > 1e-6 * (1.0 + std::abs(res.value));
    return res;
}

/// Largest strike of a call, put or butterfly; 0 for sampled payoffs.
inline double largest_strike(const Payoff& payoff) {
    const auto k = payoff.kinks();
    return k.empty() ? 0.0 : *std::max_element(k.begin(), k.end());
}

/// Default quadrature grid (dx, 10 K] for the payoff's largest strike.
inline SpatialGrid default_grid(const Payoff& payoff, double dx) {
    const double K = largest_strike(payoff);
    detail::require(K > 0.0, "default grid needs a strike; pass an explicit grid for sampled payoffs");
    const double x_max = dx * std::ceil(10.0 * K / dx - 1e-9);
    return SpatialGrid::from_cutoff(x_max, dx);
}

struct Greeks {
    double delta = 0.0;
    double gamma = 0.0;
};

/// Central differences of price(t, x) with step dx.
template <class PriceFn>
Greeks greeks(PriceFn&& price, double t, double x, double dx) {
    detail::require(dx > 0.0, "greeks step dx must be > 0");
    if (!(x - dx > 0.0)) throw DomainError("greeks require x - dx > 0");
    const double up = price(t, x + dx);
    const double mid = price(t, x);
    const double dn = price(t, x - dx);
    return {(up - dn) / (2.0 * dx), (up + dn - 2.0 * mid) / (dx * dx)};
}

struct CurveGreeks {
    double x = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

/// Central differences on the interior nodes of a uniformly spaced curve.
inline std::vector<CurveGreeks> curve_greeks(const PriceCurve& curve) {
    detail::require(curve.size() >= 3, "curve_greeks needs at least three points");
    std::vector<CurveGreeks> out;
    out.reserve(curve.size() - 2);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double h = curve[i + 1].x - curve[i].x;
        out.push_back({curve[i].x, (curve[i + 1].value - curve[i - 1].value) / (2.0 * h),
                       (curve[i + 1].value + curve[i - 1].value - 2.0 * curve[i].value) / (h * h)});
    }
    return out;
}

/// Closed-form prices at every grid node.
inline PriceCurve price_curve_closed(int order, const Model& model, double t, const Payoff& payoff, const SpatialGrid& grid) {
    PriceCurve out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = {grid.node(i), price_closed(order, model, t, payoff, grid.node(i))};
    validate_curve(out);
    return out;
}

}  // namespace lvasym
