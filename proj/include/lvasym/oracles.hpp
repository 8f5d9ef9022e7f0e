#pragma once

/// @file oracles.hpp
/// @brief Reference prices: exact Black-Scholes, Hagan-Woodward CEV implied
/// volatility, and a Crank-Nicolson solver for arbitrary models.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lvasym/errors.hpp"
#include "lvasym/grid.hpp"
#include "lvasym/models.hpp"
#include "lvasym/payoff.hpp"
#include "lvasym/special.hpp"

namespace lvasym {

namespace detail {

inline void check_bs_inputs(double t, double K, double x, double sigma) {
    require(t > 0.0 && K > 0.0 && x > 0.0 && sigma > 0.0, "black-scholes inputs t, K, x, sigma must be > 0");
}

inline double bs_d1(double t, double K, double x, double sigma, double r) {
    return (std::log(x / K) + (r + 0.5 * sigma * sigma) * t) / (sigma * std::sqrt(t));
}

}  // namespace detail

/// Black-Scholes call x N(d1) - K e^{-rt} N(d2).
inline double bs_exact(double t, double K, double x, double sigma, double r) {
    detail::check_bs_inputs(t, K, x, sigma);
    const double d1 = detail::bs_d1(t, K, x, sigma, r);
    const double d2 = d1 - sigma * std::sqrt(t);
    return x * norm_cdf(d1) - K * std::exp(-r * t) * norm_cdf(d2);
}

inline double bs_put_exact(double t, double K, double x, double sigma, double r) {
    detail::check_bs_inputs(t, K, x, sigma);
    const double d1 = detail::bs_d1(t, K, x, sigma, r);
    const double d2 = d1 - sigma * std::sqrt(t);
    return K * std::exp(-r * t) * norm_cdf(-d2) - x * norm_cdf(-d1);
}

inline double bs_delta(double t, double K, double x, double sigma, double r) {
    detail::check_bs_inputs(t, K, x, sigma);
    return norm_cdf(detail::bs_d1(t, K, x, sigma, r));
}

inline double bs_gamma(double t, double K, double x, double sigma, double r) {
    detail::check_bs_inputs(t, K, x, sigma);
    return norm_pdf(detail::bs_d1(t, K, x, sigma, r)) / (x * sigma * std::sqrt(t));
}

/// Hagan-Woodward implied Black volatility for CEV local volatility sigma x^beta.
///
/// a = sigma sqrt((e^{2y} - 1)/(2y)) with y = r(1-beta)T; at y = 0 the
/// removable singularity is replaced by its limit a = sigma.
inline double hagan_woodward_vol(double T, double K, double S0, double sigma, double beta, double r) {
    detail::require(T > 0.0 && K > 0.0 && S0 > 0.0 && sigma > 0.0, "hagan-woodward inputs T, K, S0, sigma must be > 0");
    detail::require(beta > 0.0 && beta <= 1.0, "hagan-woodward exponent beta must satisfy 0 < beta <= 1");
    const double y = r * (1.0 - beta) * T;
    const double a = y == 0.0 ? sigma : sigma * std::sqrt(std::expm1(2.0 * y) / (2.0 * y));
    const double fwd = std::exp(r * T) * S0;
    const double f = 0.5 * (fwd + K);
    const double omb = 1.0 - beta;
    const double m = (fwd - K) / f;
    const double corr = 1.0 + omb * (2.0 + beta) * m * m / 24.0 + omb * omb * a * a * T / (24.0 * std::pow(f, 2.0 * omb));
    return a / std::pow(f, omb) * corr;
}

inline double hagan_woodward_price(double T, double K, double S0, double sigma, double beta, double r) {
    return bs_exact(T, K, S0, hagan_woodward_vol(T, K, S0, sigma, beta, r), r);
}

struct CNConfig {
    SpatialGrid grid;
    double dt;
    double t_total;
    /// Leading time steps replaced by two implicit-Euler half steps each, to
    /// damp the payoff kink.
    int rannacher_steps = 2;
};

namespace detail {

/// Solves a tridiagonal system in place (lower, diag, upper, rhs -> rhs).
inline void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up, std::vector<double>& rhs) {
    const std::size_t n = di.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (di[i - 1] == 0.0) throw SingularMatrix("tridiagonal pivot vanished");
        const double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (di[n - 1] == 0.0) throw SingularMatrix("tridiagonal pivot vanished");
    rhs[n - 1] /= di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

/// One theta-scheme step of dU/dt = A(t_mid) U over dt on the interior nodes.
/// theta = 1/2 is Crank-Nicolson, theta = 1 implicit Euler.
inline void theta_step(const Model& model, const SpatialGrid& g, std::vector<double>& U, double t0, double dt, double theta,
                       double lower_next) {
    const std::size_t n = g.size();
    const std::size_t m = n - 2;  // unknowns 1..n-2
    const double h = g.dx();
    const double t_mid = t0 + 0.5 * dt;

    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        const Coefficients co = model.coefficients(t_mid, g.node(i));
        const double diff = 0.5 * co.a * co.a / (h * h);
        const double conv = co.b / (2.0 * h);
        const double l = diff - conv;
        const double d = -2.0 * diff + co.c;
        const double u = diff + conv;
        const double explicit_part = l * U[i - 1] + d * U[i] + u * U[i + 1];
        rhs[k] = U[i] + (1.0 - theta) * dt * explicit_part;
        lo[k] = -theta * dt * l;
        di[k] = 1.0 - theta * dt * d;
        up[k] = -theta * dt * u;
    }
    // Dirichlet at x_min.
    rhs[0] -= lo[0] * lower_next;
    lo[0] = 0.0;
    // U_{n-1} = 2 U_{n-2} - U_{n-3} (zero gamma at x_max).
    const std::size_t last = m - 1;
    lo[last] -= up[last];
    di[last] += 2.0 * up[last];
    up[last] = 0.0;

    thomas(lo, di, up, rhs);
    U[0] = lower_next;
    for (std::size_t k = 0; k < m; ++k) U[k + 1] = rhs[k];
    U[n - 1] = 2.0 * U[n - 2] - U[n - 3];
}

}  // namespace detail

/// Crank-Nicolson solution of dU/dt = 1/2 a^2 U_xx + b U_x + c U on the grid.
///
/// Boundaries: Dirichlet h(x_min) exp(c t) at x_min (0 for calls and
/// butterflies), zero gamma at x_max. The step count is ceil(t_total/dt)
/// with the step shortened to divide t_total evenly.
inline PriceCurve cn_solve(const Model& model, const CNConfig& cfg, const Payoff& payoff) {
    detail::require(model.has_coefficients(), "cn_solve: model has no raw coefficient function");
    detail::require(cfg.dt > 0.0 && cfg.t_total > 0.0, "cn_solve: dt and t_total must be > 0");
    detail::require(cfg.dt <= cfg.t_total * (1.0 + 1e-12), "cn_solve: dt must not exceed t_total");
    detail::require(cfg.rannacher_steps >= 0, "cn_solve: rannacher_steps must be >= 0");
    const SpatialGrid& g = cfg.grid;
    detail::require(g.size() >= 4, "cn_solve: grid needs at least four nodes");

    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(cfg.t_total / cfg.dt - 1e-9)));
    const double dt = cfg.t_total / static_cast<double>(steps);

    std::vector<double> U = payoff.sample(g);
    const double h_min = U[0];
    auto lower = [&](double t) {
        return h_min == 0.0 ? 0.0 : h_min * std::exp(model.coefficients(0.0, g.x_min()).c * t);
    };

    for (std::size_t k = 0; k < steps; ++k) {
        const double t0 = static_cast<double>(k) * dt;
        if (k < static_cast<std::size_t>(cfg.rannacher_steps)) {
            detail::theta_step(model, g, U, t0, 0.5 * dt, 1.0, lower(t0 + 0.5 * dt));
            detail::theta_step(model, g, U, t0 + 0.5 * dt, 0.5 * dt, 1.0, lower(t0 + dt));
        } else {
            detail::theta_step(model, g, U, t0, dt, 0.5, lower(t0 + dt));
        }
    }

    PriceCurve out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = {g.node(i), U[i]};
    validate_curve(out);
    return out;
}

/// Max |U(dx, dt) - U(dx/2, dt/2)| over the coarse nodes.
inline double cn_richardson_defect(const Model& model, const CNConfig& cfg, const Payoff& payoff) {
    const PriceCurve coarse = cn_solve(model, cfg, payoff);
    CNConfig fine = cfg;
    fine.grid = SpatialGrid(cfg.grid.x_min(), cfg.grid.x_max(), 0.5 * cfg.grid.dx());
    fine.dt = 0.5 * cfg.dt;
    fine.rannacher_steps = 2 * cfg.rannacher_steps;
    const PriceCurve refined = cn_solve(model, fine, payoff);
    double defect = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
        defect = std::max(defect, std::abs(coarse[i].value - refined[2 * i].value));
    return defect;
}

}  // namespace lvasym
