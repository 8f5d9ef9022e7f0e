#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "lvasym/errors.hpp"
#include "lvasym/grid.hpp"

namespace lvasym {

struct Call {
    double strike;
};

struct Put {
    double strike;
};

/// Hat function vanishing outside [k1, k2] and peaking at k with height k - k1.
struct Butterfly {
    double k1;
    double k;
    double k2;
};

/// Terminal values tabulated on a grid; evaluated off-node by cubic interpolation.
struct Sampled {
    SpatialGrid grid;
    std::vector<double> values;
};

namespace detail {

/// Four-point Lagrange interpolation of node values, linear in the end intervals,
/// zero outside [x_min, x_max].
inline double interpolate_cubic(const SpatialGrid& grid, std::span<const double> v, double y) {
    const std::size_t n = v.size();
    if (y < grid.x_min() || y > grid.x_max()) return 0.0;
    const double s = (y - grid.x_min()) / grid.dx();
    auto i = static_cast<std::ptrdiff_t>(std::floor(s));
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 2);
    const double f = s - static_cast<double>(i);
    if (i == 0 || i + 2 >= static_cast<std::ptrdiff_t>(n)) {
        return v[static_cast<std::size_t>(i)] * (1.0 - f) + v[static_cast<std::size_t>(i) + 1] * f;
    }
    const auto k = static_cast<std::size_t>(i);
    const double p0 = v[k - 1], p1 = v[k], p2 = v[k + 1], p3 = v[k + 2];
    // nodes at -1, 0, 1, 2
    const double w0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    const double w1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
    const double w2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
    const double w3 = (f + 1.0) * f * (f - 1.0) / 6.0;
    return w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3;
}

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace detail

class Payoff {
public:
    using Variant = std::variant<Call, Put, Butterfly, Sampled>;

    static Payoff call(double strike) {
        detail::require(strike > 0.0, "call strike must be > 0");
        return Payoff(Call{strike});
    }

    static Payoff put(double strike) {
        detail::require(strike > 0.0, "put strike must be > 0");
        return Payoff(Put{strike});
    }

    static Payoff butterfly(double k1, double k, double k2) {
        detail::require(k1 > 0.0 && k1 < k && k < k2, "butterfly strikes must satisfy 0 < k1 < k < k2");
        return Payoff(Butterfly{k1, k, k2});
    }

    static Payoff sampled(SpatialGrid grid, std::vector<double> values) {
        detail::require(values.size() == grid.size(), "sampled payoff needs one value per grid node");
        for (double v : values) detail::require(std::isfinite(v), "sampled payoff values must be finite");
        return Payoff(Sampled{grid, std::move(values)});
    }

    [[nodiscard]] const Variant& variant() const { return v_; }
    [[nodiscard]] bool is_sampled() const { return std::holds_alternative<Sampled>(v_); }

    double operator()(double y) const {
        return std::visit(
            [y](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, Call>) {
                    return detail::positive_part(y - p.strike);
                } else if constexpr (std::is_same_v<T, Put>) {
                    return detail::positive_part(p.strike - y);
                } else if constexpr (std::is_same_v<T, Butterfly>) {
                    const auto w = butterfly_weights(p);
                    return w[0] * detail::positive_part(y - p.k1) + w[1] * detail::positive_part(y - p.k) +
                           w[2] * detail::positive_part(y - p.k2);
                } else {
                    return detail::interpolate_cubic(p.grid, p.values, y);
                }
            },
            v_);
    }

    /// Points where the payoff's first derivative jumps.
    [[nodiscard]] std::vector<double> kinks() const {
        return std::visit(
            [](const auto& p) -> std::vector<double> {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, Call> || std::is_same_v<T, Put>) return {p.strike};
                else if constexpr (std::is_same_v<T, Butterfly>) return {p.k1, p.k, p.k2};
                else return {};
            },
            v_);
    }

    /// Values at every node of @p grid.
    [[nodiscard]] std::vector<double> sample(const SpatialGrid& grid) const {
        std::vector<double> out(grid.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(grid.node(i));
        return out;
    }

    /// Call-spread weights (1, w_k, w_k2) with hat = (y-k1)+ + w_k (y-k)+ + w_k2 (y-k2)+.
    static std::array<double, 3> butterfly_weights(const Butterfly& b) {
        const double span = b.k2 - b.k;
        return {1.0, -(b.k2 - b.k1) / span, (b.k - b.k1) / span};
    }

private:
    explicit Payoff(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

inline std::string describe(const Payoff& p) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Call>) return "call";
            else if constexpr (std::is_same_v<T, Put>) return "put";
            else if constexpr (std::is_same_v<T, Butterfly>) return "butterfly";
            else return "sampled";
        },
        p.variant());
}

}  // namespace lvasym
