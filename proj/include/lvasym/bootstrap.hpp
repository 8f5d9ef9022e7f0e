#pragma once

/// @file bootstrap.hpp
/// @brief Long maturities by composing the short-time kernel: e^{tL} is
/// approximated by n_steps grid convolutions with G_{t/n}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lvasym/errors.hpp"
#include "lvasym/grid.hpp"
#include "lvasym/kernel.hpp"
#include "lvasym/oracles.hpp"
#include "lvasym/payoff.hpp"
#include "lvasym/pricing.hpp"
#include "lvasym/quadrature.hpp"

namespace lvasym {

struct BootstrapConfig {
    KernelSpec spec;
    double t_total = 1.0;
    int n_steps = 10;
    SpatialGrid grid;
    /// Use the closed-form price for the first hop when the payoff is a call,
    /// put or butterfly and the basepoint is z = x.
    bool closed_form_first_step = true;
    QuadratureOptions quadrature{};
};

struct BootstrapDiagnostics {
    bool closed_form_first_step = false;
    /// Largest |mass - (1 + c tau)| over the rows checked.
    double max_mass_defect = 0.0;
    std::size_t rows_checked = 0;
    std::vector<std::string> warnings;
};

/// Mass tolerance for a single bootstrap step.
inline constexpr double kMassTolerance = 1e-4;
/// Steps at least this long get a warning; the expansion is short-time only.
inline constexpr double kLongStepWarning = 0.4;

namespace detail {

inline bool closed_first_hop_available(const BootstrapConfig& cfg, const Payoff& payoff) {
    return cfg.closed_form_first_step && cfg.spec.basepoint == BasepointRule::AtX && cfg.spec.order >= 1 &&
           !payoff.is_sampled();
}

/// Checks the kernel mass on rows whose 10-width window lies inside the grid.
inline void check_mass(const BootstrapConfig& cfg, double tau, BootstrapDiagnostics& diag) {
    if (cfg.spec.basepoint != BasepointRule::AtX) return;
    const SpatialGrid& g = cfg.grid;
    const std::vector<double> ones(g.size(), 1.0);
    GridFunction f{&g, ones, [](double) { return 1.0; }, {}};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const KernelRow row(cfg.spec, tau, g.node(i));
        const double w = 10.0 * row.width();
        if (row.x() - w < g.x_min() || row.x() + w > g.x_max()) continue;
        const double expected = cfg.spec.order == 2 ? 1.0 + jet(cfg.spec.model, row.x()).c * tau : 1.0;
        const double defect = std::abs(integrate_row(row, f, cfg.quadrature) - expected);
        diag.max_mass_defect = std::max(diag.max_mass_defect, defect);
        ++diag.rows_checked;
        if (defect > kMassTolerance)
            throw GridTooCoarse("kernel mass off by " + std::to_string(defect) + " at x = " + std::to_string(row.x()) +
                                "; refine dx relative to a sqrt(t/n)");
    }
}

}  // namespace detail

/// Terminal curve after n_steps convolutions with G_{t/n} on the grid.
inline PriceCurve bootstrap_solve(const BootstrapConfig& cfg, const Payoff& payoff, BootstrapDiagnostics* diagnostics = nullptr) {
    detail::check_order(cfg.spec.order);
    detail::require(cfg.n_steps >= 1, "bootstrap needs n_steps >= 1");
    detail::check_time(cfg.t_total);
    const SpatialGrid& g = cfg.grid;
    const double tau = cfg.t_total / cfg.n_steps;

    BootstrapDiagnostics local;
    BootstrapDiagnostics& diag = diagnostics ? *diagnostics : local;
    diag = {};
    if (tau >= kLongStepWarning)
        diag.warnings.push_back("step t/n = " + std::to_string(tau) + " is long for a short-time expansion; consider more steps");

    detail::check_mass(cfg, tau, diag);

    std::vector<double> u;
    int done = 0;
    if (detail::closed_first_hop_available(cfg, payoff)) {
        u.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) u[i] = price_closed(cfg.spec.order, cfg.spec.model, tau, payoff, g.node(i));
        diag.closed_form_first_step = true;
        done = 1;
    } else {
        u = payoff.sample(g);
    }

    std::vector<double> next(g.size());
    for (int step = done; step < cfg.n_steps; ++step) {
        const GridFunction f = step == 0 ? grid_function(g, u, payoff) : grid_function(g, u);
        for (std::size_t i = 0; i < g.size(); ++i) next[i] = integrate_row(KernelRow(cfg.spec, tau, g.node(i)), f, cfg.quadrature);
        u.swap(next);
    }

    PriceCurve out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = {g.node(i), u[i]};
    validate_curve(out);
    return out;
}

struct BootstrapErrorRow {
    double t = 0.0;
    double linf_error = 0.0;
};

/// Max |bootstrap - oracle| over grid nodes in (0, window_hi] for a call
/// struck at K, one row per maturity. BSM models use the exact formula,
/// other models a Crank-Nicolson run on the same grid with dt = oracle_dt.
inline std::vector<BootstrapErrorRow> bootstrap_error_table(const KernelSpec& spec, double K, const std::vector<double>& times,
                                                            int n_steps, const SpatialGrid& grid,
                                                            double window_hi = std::numeric_limits<double>::quiet_NaN(),
                                                            double oracle_dt = 1e-3) {
    const double hi = std::isnan(window_hi) ? 2.0 * K : window_hi;
    const Payoff payoff = Payoff::call(K);
    std::vector<BootstrapErrorRow> rows;
    for (double t : times) {
        BootstrapConfig cfg{spec, t, n_steps, grid};
        const PriceCurve approx = bootstrap_solve(cfg, payoff);
        std::vector<double> oracle(grid.size());
        if (spec.model.kind() == ModelKind::BSM) {
            for (std::size_t i = 0; i < grid.size(); ++i)
                oracle[i] = bs_exact(t, K, grid.node(i), spec.model.sigma(), spec.model.r());
        } else {
            const PriceCurve cn = cn_solve(spec.model, CNConfig{grid, std::min(oracle_dt, t), t}, payoff);
            for (std::size_t i = 0; i < grid.size(); ++i) oracle[i] = cn[i].value;
        }
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid.node(i) <= hi) err = std::max(err, std::abs(approx[i].value - oracle[i]));
        rows.push_back({t, err});
    }
    return rows;
}

}  // namespace lvasym
