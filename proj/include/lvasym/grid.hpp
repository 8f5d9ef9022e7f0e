#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lvasym/errors.hpp"

namespace lvasym {

/// Uniform truncated grid x_min, x_min + dx, ..., x_max on the positive half line.
class SpatialGrid {
public:
    SpatialGrid(double x_min, double x_max, double dx) : x_min_(x_min), x_max_(x_max), dx_(dx) {
        detail::require(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(dx), "grid bounds must be finite");
        detail::require(x_min > 0.0, "grid x_min must be > 0 (left cutoff)");
        detail::require(dx > 0.0, "grid dx must be > 0");
        detail::require(x_min < x_max, "grid requires x_min < x_max");
        const double steps = (x_max - x_min) / dx;
        const double rounded = std::round(steps);
        detail::require(std::abs(steps - rounded) <= 1e-9 * std::max(1.0, steps),
                        "grid (x_max - x_min)/dx must be an integer");
        detail::require(rounded >= 2.0, "grid needs at least two intervals");
        intervals_ = static_cast<std::size_t>(rounded);
    }

    /// Grid with left cutoff at the first node above 0: x_min = dx.
    static SpatialGrid from_cutoff(double x_max, double dx) { return SpatialGrid(dx, x_max, dx); }

    [[nodiscard]] double x_min() const { return x_min_; }
    [[nodiscard]] double x_max() const { return x_max_; }
    [[nodiscard]] double dx() const { return dx_; }
    [[nodiscard]] std::size_t size() const { return intervals_ + 1; }
    [[nodiscard]] double node(std::size_t i) const {
        return i == intervals_ ? x_max_ : x_min_ + static_cast<double>(i) * dx_;
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> xs(size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = node(i);
        return xs;
    }

    /// Index of the node equal to x (within 1e-9 dx), or size() if x is not a node.
    [[nodiscard]] std::size_t node_index(double x) const {
        const double s = (x - x_min_) / dx_;
        const double k = std::round(s);
        if (k < 0.0 || k > static_cast<double>(intervals_) || std::abs(s - k) > 1e-9) return size();
        return static_cast<std::size_t>(k);
    }

private:
    double x_min_;
    double x_max_;
    double dx_;
    std::size_t intervals_ = 0;
};

struct CurvePoint {
    double x = 0.0;
    double value = 0.0;
};

/// Ordered (x, value) samples; x strictly increasing.
using PriceCurve = std::vector<CurvePoint>;

inline void validate_curve(const PriceCurve& curve) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!std::isfinite(curve[i].value)) throw Error("price curve has a non-finite value at x = " + std::to_string(curve[i].x));
        if (i > 0 && !(curve[i].x > curve[i - 1].x)) throw Error("price curve abscissae must be strictly increasing");
    }
}

}  // namespace lvasym
