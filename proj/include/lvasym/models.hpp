#pragma once

/// @file models.hpp
/// @brief Local-volatility models and the coefficient jet consumed by the kernels.
///
/// A model describes the operator
///
///     L(t) = 1/2 a(t,x)^2 d_xx + b(t,x) d_x + c(t,x)
///
/// Every kernel formula of order <= 2 only needs the values a, a', a'', da/dt,
/// b, b', c frozen at (t = 0, z) for a basepoint z. That bundle is the
/// CoefficientJet.

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "lvasym/errors.hpp"

namespace lvasym {

struct CoefficientJet {
    double a = 0.0;        ///< volatility coefficient
    double da_dx = 0.0;
    double d2a_dx2 = 0.0;
    double da_dt = 0.0;    ///< time derivative at t = 0
    double b = 0.0;        ///< drift coefficient
    double db_dx = 0.0;
    double c = 0.0;        ///< zeroth-order (discount) coefficient

    [[nodiscard]] bool finite() const {
        return std::isfinite(a) && std::isfinite(da_dx) && std::isfinite(d2a_dx2) &&
               std::isfinite(da_dt) && std::isfinite(b) && std::isfinite(db_dx) &&
               std::isfinite(c);
    }

    friend bool operator==(const CoefficientJet&, const CoefficientJet&) = default;
};

/// Raw (a, b, c) at a point (t, x); used by the finite-difference oracle.
struct Coefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

enum class ModelKind { BSM, TimeDependentBSM, CEV, Custom };

inline std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::BSM: return "bsm";
        case ModelKind::TimeDependentBSM: return "tdbsm";
        case ModelKind::CEV: return "cev";
        case ModelKind::Custom: return "custom";
    }
    return "unknown";
}

/// Immutable model description. Build with the named constructors.
class Model {
public:
    using JetFn = std::function<CoefficientJet(double)>;
    using CoefficientFn = std::function<Coefficients(double, double)>;

    /// a = sigma x, b = r x, c = -r.
    static Model bsm(double sigma, double r) {
        check_sigma(sigma);
        return Model(ModelKind::BSM, sigma, 0.0, r, 1.0);
    }

    /// sigma(t) = sigma + sigma_dot0 t; only sigma(0) and sigma'(0) enter the kernels.
    static Model time_dependent_bsm(double sigma, double sigma_dot0, double r) {
        check_sigma(sigma);
        detail::require(std::isfinite(sigma_dot0), "sigma_dot0 must be finite");
        return Model(ModelKind::TimeDependentBSM, sigma, sigma_dot0, r, 1.0);
    }

    /// a = sigma x^alpha, 0 < alpha <= 1.
    static Model cev(double sigma, double alpha, double r) {
        check_sigma(sigma);
        detail::require(alpha > 0.0 && alpha <= 1.0, "CEV exponent alpha must satisfy 0 < alpha <= 1");
        return Model(ModelKind::CEV, sigma, 0.0, r, alpha);
    }

    /// User-supplied analytic jet. The raw coefficient function is optional and
    /// only needed by the Crank-Nicolson oracle.
    static Model custom(JetFn jet, CoefficientFn coefficients = {}) {
        detail::require(static_cast<bool>(jet), "custom model requires a jet function");
        Model m(ModelKind::Custom, 0.0, 0.0, 0.0, 1.0);
        m.jet_fn_ = std::move(jet);
        m.coefficient_fn_ = std::move(coefficients);
        return m;
    }

    [[nodiscard]] ModelKind kind() const { return kind_; }
    [[nodiscard]] double sigma() const { return sigma_; }
    [[nodiscard]] double sigma_dot0() const { return sigma_dot0_; }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] bool has_coefficients() const {
        return kind_ != ModelKind::Custom || static_cast<bool>(coefficient_fn_);
    }

    /// Raw coefficients at (t, x).
    [[nodiscard]] Coefficients coefficients(double t, double x) const {
        switch (kind_) {
            case ModelKind::BSM: return {sigma_ * x, r_ * x, -r_};
            case ModelKind::TimeDependentBSM: return {(sigma_ + sigma_dot0_ * t) * x, r_ * x, -r_};
            case ModelKind::CEV: return {sigma_ * std::pow(x, alpha_), r_ * x, -r_};
            case ModelKind::Custom:
                if (!coefficient_fn_) throw DomainError("custom model has no raw coefficient function");
                return coefficient_fn_(t, x);
        }
        return {};
    }

    [[nodiscard]] CoefficientJet raw_jet(double z) const {
        switch (kind_) {
            case ModelKind::BSM:
                return {sigma_ * z, sigma_, 0.0, 0.0, r_ * z, r_, -r_};
            case ModelKind::TimeDependentBSM:
                return {sigma_ * z, sigma_, 0.0, sigma_dot0_ * z, r_ * z, r_, -r_};
            case ModelKind::CEV: {
                const double zpow = std::pow(z, alpha_);
                const double zpow_m1 = std::pow(z, alpha_ - 1.0);
                const double zpow_m2 = std::pow(z, alpha_ - 2.0);
                return {sigma_ * zpow,
                        alpha_ * sigma_ * zpow_m1,
                        alpha_ * (alpha_ - 1.0) * sigma_ * zpow_m2,
                        0.0,
                        r_ * z,
                        r_,
                        -r_};
            }
            case ModelKind::Custom: return jet_fn_(z);
        }
        return {};
    }

private:
    Model(ModelKind kind, double sigma, double sigma_dot0, double r, double alpha)
        : kind_(kind), sigma_(sigma), sigma_dot0_(sigma_dot0), r_(r), alpha_(alpha) {
        detail::require(std::isfinite(r), "interest rate must be finite");
    }

    static void check_sigma(double sigma) {
        detail::require(std::isfinite(sigma) && sigma > 0.0, "volatility sigma must be > 0");
    }

    ModelKind kind_;
    double sigma_;
    double sigma_dot0_;
    double r_;
    double alpha_;
    JetFn jet_fn_;
    CoefficientFn coefficient_fn_;
};

/// Exact analytic jet of @p model at (0, z).
///
/// Throws DomainError for z <= 0 and DegenerateCoefficient when a(0,z) <= 0
/// or any field is not finite.
inline CoefficientJet jet(const Model& model, double z) {
    if (!(z > 0.0)) throw DomainError("basepoint z must be > 0, got " + std::to_string(z));
    CoefficientJet j = model.raw_jet(z);
    if (!j.finite()) throw DegenerateCoefficient("coefficient jet is not finite at z = " + std::to_string(z));
    if (!(j.a > 0.0)) throw DegenerateCoefficient("volatility coefficient a(0,z) <= 0 at z = " + std::to_string(z));
    return j;
}

enum class BasepointRule { AtX, AtY, Midpoint };

/// Admissible basepoint z(x, y); every rule satisfies z(x, x) = x.
inline double basepoint(BasepointRule rule, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("basepoint requires x, y > 0");
    switch (rule) {
        case BasepointRule::AtX: return x;
        case BasepointRule::AtY: return y;
        case BasepointRule::Midpoint: return 0.5 * (x + y);
    }
    return x;
}

}  // namespace lvasym
