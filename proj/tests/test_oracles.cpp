#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lvasym/oracles.hpp"
#include "lvasym/pricing.hpp"
#include "support/printed.hpp"

using namespace lvasym;

namespace {

double value_at(const PriceCurve& c, double x) {
    for (const auto& p : c)
        if (std::abs(p.x - x) < 1e-9) return p.value;
    ADD_FAILURE() << "no node at " << x;
    return NAN;
}

}  // namespace

TEST(NormalCdf, AgreesWithErf) {
    for (double x = -8; x <= 8; x += 0.01) EXPECT_NEAR(norm_cdf(x), 0.5 * (1 + std::erf(x / std::numbers::sqrt2)), 1e-15);
    EXPECT_GT(norm_cdf(-30), 0.0);
}

TEST(BlackScholes, Limits) {
    const double x = 15, sig = 0.3;
    const double small = bs_exact(1e-6, x, x, sig, 0.0);
    EXPECT_GT(small, 0.0);
    EXPECT_NEAR(small, x * sig * 1e-3 / std::sqrt(2 * std::numbers::pi), 1e-9);
    EXPECT_NEAR(bs_exact(0.5, 1e-12, 15, 0.3, 0.1), 15.0, 1e-10);
    EXPECT_THROW(bs_exact(0.0, 15, 15, 0.3, 0.1), DomainError);
    EXPECT_THROW(bs_exact(0.1, 15, -15, 0.3, 0.1), DomainError);
}

TEST(BlackScholes, PutCallParityAndGreeks) {
    const double t = 0.5, K = 20, s = 0.5, r = 0.1;
    for (double x : {5.0, 15.0, 20.0, 31.0}) {
        EXPECT_NEAR(bs_exact(t, K, x, s, r) - bs_put_exact(t, K, x, s, r), x - K * std::exp(-r * t), 1e-12);
        EXPECT_NEAR(bs_exact(t, K, x, s, r), printed::bs_call(t, K, x, s, r), 1e-12);
        auto f = [&](double y) { return bs_exact(t, K, y, s, r); };
        EXPECT_NEAR(bs_delta(t, K, x, s, r), printed::d1(f, x, 1e-5), 1e-8);
        EXPECT_NEAR(bs_gamma(t, K, x, s, r), printed::d2(f, x, 1e-3), 1e-6);
    }
}

TEST(HaganWoodward, LognormalAndSymmetryLimits) {
    EXPECT_NEAR(hagan_woodward_vol(0.5, 20, 18, 0.3, 1.0, 0.1), 0.3, 1e-15);
    // at the forward strike the middle correction vanishes
    const double T = 0.3, S = 20, r = 0.1, sig = 0.3, beta = 2.0 / 3.0;
    const double K = std::exp(r * T) * S;
    const double y = r * (1 - beta) * T;
    const double a = sig * std::sqrt(std::expm1(2 * y) / (2 * y));
    const double expected = a / std::pow(K, 1 - beta) * (1 + std::pow(1 - beta, 2) * a * a * T / (24 * std::pow(K, 2 * (1 - beta))));
    EXPECT_NEAR(hagan_woodward_vol(T, K, S, sig, beta, r), expected, 1e-15);
    // r = 0 uses the limit a = sigma
    const double v0 = hagan_woodward_vol(T, 20, 19, sig, beta, 0.0);
    EXPECT_NEAR(v0, hagan_woodward_vol(T, 20, 19, sig, beta, 1e-9), 1e-9);
    EXPECT_THROW(hagan_woodward_vol(T, 20, 19, sig, 0.0, 0.1), DomainError);
}

TEST(CrankNicolson, ZeroPayoffStaysZero) {
    const SpatialGrid g = SpatialGrid::from_cutoff(50, 0.1);
    const Payoff zero = Payoff::sampled(g, std::vector<double>(g.size(), 0.0));
    for (const auto& p : cn_solve(Model::bsm(0.3, 0.1), CNConfig{g, 1e-3, 0.2}, zero)) EXPECT_EQ(p.value, 0.0);
}

TEST(CrankNicolson, ConstantPayoffDiscounts) {
    const double r = 0.07, sigma = 0.3;
    const Model driftless = Model::custom([&](double z) { return CoefficientJet{sigma * z, sigma, 0, 0, 0, 0, -r}; },
                                          [&](double, double x) { return Coefficients{sigma * x, 0.0, -r}; });
    const SpatialGrid g = SpatialGrid::from_cutoff(50, 0.05);
    const Payoff one = Payoff::sampled(g, std::vector<double>(g.size(), 1.0));
    const double t = 0.5;
    for (const auto& p : cn_solve(driftless, CNConfig{g, 1e-3, t}, one)) EXPECT_NEAR(p.value, std::exp(-r * t), 1e-6);
}

TEST(CrankNicolson, MatchesBlackScholesNearStrike) {
    const SpatialGrid g = SpatialGrid::from_cutoff(150, 0.01);
    const PriceCurve u = cn_solve(Model::bsm(0.3, 0.1), CNConfig{g, 1e-4, 0.1}, Payoff::call(15));
    for (double x = 12; x <= 18.001; x += 0.5) EXPECT_NEAR(value_at(u, x), bs_exact(0.1, 15, x, 0.3, 0.1), 1e-4);
    const PriceCurve p = cn_solve(Model::bsm(0.3, 0.1), CNConfig{g, 1e-4, 0.1}, Payoff::put(15));
    for (double x = 12; x <= 18.001; x += 0.5) EXPECT_NEAR(value_at(p, x), bs_put_exact(0.1, 15, x, 0.3, 0.1), 1e-4);
}

TEST(CrankNicolson, AtTheMoneyFineGrid) {
    const SpatialGrid g = SpatialGrid::from_cutoff(60, 0.005);
    const PriceCurve u = cn_solve(Model::bsm(0.3, 0.0), CNConfig{g, 1e-5, 0.1}, Payoff::call(15));
    EXPECT_NEAR(value_at(u, 15), bs_exact(0.1, 15, 15, 0.3, 0.0), 1e-5);
}

TEST(CrankNicolson, RejectsBadConfig) {
    const SpatialGrid g = SpatialGrid::from_cutoff(50, 0.1);
    EXPECT_THROW(cn_solve(Model::bsm(0.3, 0.1), CNConfig{g, 0.5, 0.1}, Payoff::call(15)), DomainError);
    const Model jet_only = Model::custom([](double z) { return CoefficientJet{0.3 * z, 0.3, 0, 0, 0, 0, 0}; });
    EXPECT_THROW(cn_solve(jet_only, CNConfig{g, 1e-3, 0.1}, Payoff::call(15)), DomainError);
}

TEST(CrankNicolson, RichardsonDefectShrinksQuadratically) {
    const Model m = Model::bsm(0.3, 0.1);
    const double d1 = cn_richardson_defect(m, CNConfig{SpatialGrid::from_cutoff(60, 0.04), 4e-3, 0.1}, Payoff::call(15));
    const double d2 = cn_richardson_defect(m, CNConfig{SpatialGrid::from_cutoff(60, 0.02), 2e-3, 0.1}, Payoff::call(15));
    EXPECT_NEAR(std::log2(d1 / d2), 2.0, 0.3);
}

TEST(CevClosed, NearCrankNicolson) {
    const double beta = 2.0 / 3.0;
    const Model m = Model::cev(0.3, beta, 0.1);
    const SpatialGrid g = SpatialGrid::from_cutoff(150, 0.01);
    const PriceCurve u = cn_solve(m, CNConfig{g, 1e-4, 0.1}, Payoff::call(15));
    for (double x = 14; x <= 16.001; x += 0.25)
        EXPECT_NEAR(price_call_cev_closed(0.1, 15, x, 0.3, beta, 0.1), value_at(u, x), 1e-2) << "x = " << x;  // first order: O(t)
}

TEST(HaganWoodward, NearCrankNicolson) {
    const double beta = 2.0 / 3.0;
    const Model m = Model::cev(0.3, beta, 0.1);
    const SpatialGrid g = SpatialGrid::from_cutoff(200, 0.01);
    const PriceCurve u = cn_solve(m, CNConfig{g, 1e-4, 0.3}, Payoff::call(20));
    for (double x = 18; x <= 22.001; x += 0.5)
        EXPECT_NEAR(hagan_woodward_price(0.3, 20, x, 0.3, beta, 0.1), value_at(u, x), 1e-2) << "x = " << x;
}
