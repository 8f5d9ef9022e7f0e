#pragma once

/// @file quadrature.hpp
/// @brief Composite Simpson integration of a kernel row against a grid function.
///
/// Rows whose Gaussian width a(x) sqrt(t) is resolved by the grid are
/// integrated on the grid nodes, windowed to the kernel's support and split
/// at payoff kinks that fall on nodes. Narrower rows are integrated on a
/// local sub-grid around x, with off-node values taken from the integrand's
/// evaluator (exact for analytic payoffs, cubic interpolation otherwise).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lvasym/errors.hpp"
#include "lvasym/grid.hpp"
#include "lvasym/kernel.hpp"
#include "lvasym/payoff.hpp"

namespace lvasym {

/// Simpson weights for n >= 2 equally spaced samples: trapezoid for one
/// interval, Simpson 1/3 for an even count, and a Simpson 3/8 tail on the
/// last three intervals for an odd count.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
    detail::require(n >= 2, "simpson needs at least two samples");
    std::vector<double> w(n, 0.0);
    const std::size_t m = n - 1;
    if (m == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    const std::size_t even = (m % 2 == 0) ? m : m - 3;
    for (std::size_t i = 0; i + 2 <= even; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (even != m) {
        const double c = 3.0 * h / 8.0;
        w[even] += c;
        w[even + 1] += 3.0 * c;
        w[even + 2] += 3.0 * c;
        w[even + 3] += c;
    }
    return w;
}

namespace detail {

/// Simpson sum of f(s..e) with spacing h, same rule as simpson_weights.
template <class F>
double simpson_range(F&& f, std::size_t s, std::size_t e, double h) {
    const std::size_t m = e - s;
    if (m == 0) return 0.0;
    if (m == 1) return 0.5 * h * (f(s) + f(e));
    const std::size_t even = (m % 2 == 0) ? m : m - 3;
    double acc = 0.0;
    if (even > 0) {
        double odd_sum = 0.0;
        double inner_sum = 0.0;
        for (std::size_t k = 1; k < even; k += 2) odd_sum += f(s + k);
        for (std::size_t k = 2; k < even; k += 2) inner_sum += f(s + k);
        acc += h / 3.0 * (f(s) + 4.0 * odd_sum + 2.0 * inner_sum + f(s + even));
    }
    if (even != m) {
        const std::size_t b = s + even;
        acc += 3.0 * h / 8.0 * (f(b) + 3.0 * f(b + 1) + 3.0 * f(b + 2) + f(b + 3));
    }
    return acc;
}

}  // namespace detail

inline double simpson(std::span<const double> f, double h) {
    detail::require(f.size() >= 2, "simpson needs at least two samples");
    return detail::simpson_range([&](std::size_t i) { return f[i]; }, 0, f.size() - 1, h);
}

/// A function known at every node of a grid, with an off-node evaluator and
/// the abscissae where its derivative jumps.
struct GridFunction {
    const SpatialGrid* grid = nullptr;
    std::span<const double> values;
    std::function<double(double)> eval;
    std::vector<double> kinks;
};

inline GridFunction grid_function(const SpatialGrid& grid, std::span<const double> values, const Payoff& payoff) {
    detail::require(values.size() == grid.size(), "grid function needs one value per node");
    return {&grid, values, [&payoff](double y) { return payoff(y); }, payoff.kinks()};
}

/// Interpolated view of node values (no known kinks).
inline GridFunction grid_function(const SpatialGrid& grid, std::span<const double> values) {
    detail::require(values.size() == grid.size(), "grid function needs one value per node");
    return {&grid, values,
            [&grid, values](double y) { return detail::interpolate_cubic(grid, values, y); },
            {}};
}

struct QuadratureOptions {
    /// Rows with width >= resolve_ratio * dx are integrated on the grid nodes.
    double resolve_ratio = 3.0;
    /// Narrow rows use a local step of width / refine_per_width; off disables refinement.
    bool refine_narrow_rows = true;
    double refine_per_width = 8.0;
    /// Half-width of the local sub-grid in units of the row width.
    double refine_radius = 16.0;
};

namespace detail {

inline double integrate_on_nodes(const KernelRow& row, const GridFunction& f) {
    const SpatialGrid& g = *f.grid;
    const std::size_t n = g.size();
    const double radius = row.support_radius();
    const double lo = row.x() - radius;
    const double hi = row.x() + radius;
    std::size_t i0 = 0;
    std::size_t i1 = n - 1;
    if (lo > g.x_min()) i0 = static_cast<std::size_t>(std::ceil((lo - g.x_min()) / g.dx()));
    if (hi < g.x_max()) {
        const double s = std::floor((hi - g.x_min()) / g.dx());
        i1 = s < 0.0 ? 0 : std::min(n - 1, static_cast<std::size_t>(s));
    }
    if (i0 >= n || i1 <= i0) return 0.0;

    std::vector<double> prod(i1 - i0 + 1);
    for (std::size_t i = i0; i <= i1; ++i) {
        const double u = f.values[i];
        prod[i - i0] = u == 0.0 ? 0.0 : row(g.node(i)) * u;
    }

    std::vector<std::size_t> cuts{i0};
    for (double k : f.kinks) {
        const std::size_t idx = g.node_index(k);
        if (idx < n && idx > i0 && idx < i1) cuts.push_back(idx);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(i1);

    auto at = [&](std::size_t i) { return prod[i - i0]; };
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) acc += simpson_range(at, cuts[c], cuts[c + 1], g.dx());
    return acc;
}

inline double integrate_refined(const KernelRow& row, const GridFunction& f, const QuadratureOptions& opt) {
    const SpatialGrid& g = *f.grid;
    const double w = row.width();
    const double radius = std::min(row.support_radius(), opt.refine_radius * w);
    const double lo = std::max(g.x_min(), row.x() - radius);
    const double hi = std::min(g.x_max(), row.x() + radius);
    if (!(hi > lo)) return 0.0;

    std::vector<double> cuts{lo};
    for (double k : f.kinks)
        if (k > lo && k < hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(hi);

    const double target = w / opt.refine_per_width;
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double b = cuts[c + 1];
        auto m = static_cast<std::size_t>(std::ceil((b - a) / target));
        m = std::max<std::size_t>(2, m + (m % 2));
        const double h = (b - a) / static_cast<double>(m);
        auto fy = [&](std::size_t i) {
            const double y = i == m ? b : a + static_cast<double>(i) * h;
            const double u = f.eval(y);
            return u == 0.0 ? 0.0 : row(y) * u;
        };
        acc += simpson_range(fy, 0, m, h);
    }
    return acc;
}

}  // namespace detail

/// True if the row is narrow enough that node quadrature would under-resolve it.
inline bool row_needs_refinement(const KernelRow& row, const SpatialGrid& grid, const QuadratureOptions& opt = {}) {
    return row.width() < opt.resolve_ratio * grid.dx();
}

/// Approximates the integral of G(x, y) f(y) over [x_min, x_max].
inline double integrate_row(const KernelRow& row, const GridFunction& f, const QuadratureOptions& opt = {}) {
    detail::require(f.grid != nullptr && f.values.size() == f.grid->size(), "integrate_row: malformed grid function");
    if (opt.refine_narrow_rows && f.eval && row_needs_refinement(row, *f.grid, opt))
        return detail::integrate_refined(row, f, opt);
    return detail::integrate_on_nodes(row, f);
}

}  // namespace lvasym
