#include <gtest/gtest.h>

#include <cmath>

#include "lvasym/bootstrap.hpp"
#include "lvasym/oracles.hpp"

using namespace lvasym;

namespace {

const Model kBsm = Model::bsm(0.5, 0.1);

double linf_vs_bs(const PriceCurve& c, double t, double hi = 40.0) {
    double e = 0.0;
    for (const auto& p : c)
        if (p.x <= hi) e = std::max(e, std::abs(p.value - bs_exact(t, 20, p.x, 0.5, 0.1)));
    return e;
}

double error_at(const PriceCurve& c, double t, double x) {
    for (const auto& p : c)
        if (std::abs(p.x - x) < 1e-9) return std::abs(p.value - bs_exact(t, 20, x, 0.5, 0.1));
    return NAN;
}

}  // namespace

TEST(Bootstrap, SingleStepIsPlainQuadrature) {
    const SpatialGrid g = SpatialGrid::from_cutoff(60, 0.1);
    const KernelSpec spec{Model::cev(0.4, 0.7, 0.1), 2, BasepointRule::AtX};
    BootstrapConfig cfg{spec, 0.25, 1, g};
    cfg.closed_form_first_step = false;
    const PriceCurve c = bootstrap_solve(cfg, Payoff::call(20));
    for (std::size_t i = 0; i < g.size(); i += 37)
        EXPECT_DOUBLE_EQ(c[i].value, price_quadrature(spec, 0.25, Payoff::call(20), g.node(i), g).value) << "x = " << g.node(i);
}

TEST(Bootstrap, ClosedFirstHopMatchesQuadratureHop) {
    const SpatialGrid g = SpatialGrid::from_cutoff(100, 0.05);
    const KernelSpec spec{kBsm, 2, BasepointRule::AtX};
    BootstrapConfig closed{spec, 0.2, 2, g};
    BootstrapConfig quad = closed;
    quad.closed_form_first_step = false;
    BootstrapDiagnostics d;
    const PriceCurve a = bootstrap_solve(closed, Payoff::call(20), &d);
    const PriceCurve b = bootstrap_solve(quad, Payoff::call(20));
    EXPECT_TRUE(d.closed_form_first_step);
    for (std::size_t i = 0; i < g.size(); ++i)
        // beyond ~25 the quadrature hop feels the payoff cut at x_max; the closed hop does not
        if (g.node(i) <= 25) {
            EXPECT_NEAR(a[i].value, b[i].value, 1e-6) << "x = " << g.node(i);
        }
}

TEST(Bootstrap, FrozenGaussianSemigroup) {
    const Model heat = Model::custom([](double) { return CoefficientJet{2.0, 0, 0, 0, 0, 0, 0}; });
    const SpatialGrid g = SpatialGrid::from_cutoff(60, 0.05);
    const KernelSpec spec{heat, 0, BasepointRule::AtX};
    const PriceCurve one = bootstrap_solve({spec, 0.5, 1, g}, Payoff::call(30));
    const PriceCurve two = bootstrap_solve({spec, 0.5, 2, g}, Payoff::call(30));
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.node(i) > 15 && g.node(i) < 45) {
            EXPECT_NEAR(one[i].value, two[i].value, 1e-9) << "x = " << g.node(i);
        }
}

TEST(Bootstrap, ShortMaturityMoreAccurateThanLong) {
    const SpatialGrid g = SpatialGrid::from_cutoff(200, 0.1);
    const KernelSpec spec{kBsm, 2, BasepointRule::AtX};
    const auto rows = bootstrap_error_table(spec, 20, {1.0, 0.1}, 10, g);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LT(rows[1].linf_error, rows[0].linf_error);
}

TEST(Bootstrap, ReferenceErrorTableIncludingLongMaturities) {
    const SpatialGrid g = SpatialGrid::from_cutoff(200, 0.1);
    const KernelSpec spec{kBsm, 2, BasepointRule::AtX};
    const std::vector<double> times{3, 2, 1, 0.5, 0.2, 0.1};
    const double reference[] = {0.0268, 0.0379, 0.0177, 0.0038, 4.3682e-4, 3.5703e-5};
    const auto rows = bootstrap_error_table(spec, 20, times, 10, g);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double ratio = rows[i].linf_error / reference[i];
        EXPECT_TRUE(ratio >= 1.0 / 3.0 && ratio <= 3.0) << "t = " << times[i] << " error " << rows[i].linf_error << " ratio " << ratio;
    }
}

TEST(Bootstrap, FirstOrderBootstrapDoesNotHelp) {
    const SpatialGrid g = SpatialGrid::from_cutoff(400, 0.1);
    const KernelSpec spec{kBsm, 1, BasepointRule::AtX};
    const double boot = linf_vs_bs(bootstrap_solve({spec, 1.0, 10, g}, Payoff::call(20)), 1.0);
    double direct = 0.0;
    for (std::size_t i = 1; i < g.size() && g.node(i) <= 40; ++i)
        direct = std::max(direct, std::abs(price_call_closed(1, kBsm, 1.0, 20, g.node(i)) - bs_exact(1.0, 20, g.node(i), 0.5, 0.1)));
    EXPECT_GT(boot, direct / 2.0);
}

TEST(Bootstrap, ErrorScalingWithStepCount) {
    const SpatialGrid g = SpatialGrid::from_cutoff(400, 0.1);
    const KernelSpec spec{kBsm, 2, BasepointRule::AtX};
    const double e10 = linf_vs_bs(bootstrap_solve({spec, 1.0, 10, g}, Payoff::call(20)), 1.0);
    const double e40 = linf_vs_bs(bootstrap_solve({spec, 1.0, 40, g}, Payoff::call(20)), 1.0);
    const double ratio = e10 / e40;
    EXPECT_GE(ratio, 1.6) << "e10 " << e10 << " e40 " << e40;
    EXPECT_LE(ratio, 2.6) << "e10 " << e10 << " e40 " << e40;
}

TEST(Bootstrap, ButterflyOscillationsDamped) {
    const SpatialGrid g = SpatialGrid::from_cutoff(400, 0.1);
    const KernelSpec spec{kBsm, 2, BasepointRule::AtX};
    const Payoff hat = Payoff::butterfly(15, 20, 25);
    auto exact = [](double x) { return bs_exact(1, 15, x, .5, .1) - 2 * bs_exact(1, 20, x, .5, .1) + bs_exact(1, 25, x, .5, .1); };
    const PriceCurve c = bootstrap_solve({spec, 1.0, 10, g}, hat);
    double boot = 0, direct = 0;
    for (const auto& p : c) {
        if (p.x > 40) break;
        boot = std::max(boot, std::abs(p.value - exact(p.x)));
        direct = std::max(direct, std::abs(price_closed(2, kBsm, 1.0, hat, p.x) - exact(p.x)));
    }
    EXPECT_EQ(std::floor(std::log10(boot)), -3) << boot;
    EXPECT_EQ(std::floor(std::log10(direct)), -2) << direct;
}

TEST(Bootstrap, TruncationErrorNearFortyShrinksWithWiderDomain) {
    const KernelSpec spec{kBsm, 2, BasepointRule::AtX};
    const PriceCurve narrow = bootstrap_solve({spec, 1.0, 10, SpatialGrid::from_cutoff(200, 0.1)}, Payoff::call(20));
    const PriceCurve wide = bootstrap_solve({spec, 1.0, 10, SpatialGrid::from_cutoff(400, 0.1)}, Payoff::call(20));
    EXPECT_LT(error_at(wide, 1.0, 39.0), error_at(narrow, 1.0, 39.0));
}

TEST(Bootstrap, CoarseGridRaisesWithoutRefinement) {
    BootstrapConfig cfg{KernelSpec{kBsm, 2, BasepointRule::AtX}, 0.01, 10, SpatialGrid::from_cutoff(100, 0.5)};
    cfg.quadrature.refine_narrow_rows = false;
    EXPECT_THROW(bootstrap_solve(cfg, Payoff::call(20)), GridTooCoarse);
    cfg.quadrature.refine_narrow_rows = true;
    BootstrapDiagnostics d;
    EXPECT_NO_THROW(bootstrap_solve(cfg, Payoff::call(20), &d));
    EXPECT_GT(d.rows_checked, 0u);
    EXPECT_LT(d.max_mass_defect, kMassTolerance);
}

TEST(Bootstrap, WarnsOnLongSteps) {
    BootstrapDiagnostics d;
    bootstrap_solve({KernelSpec{kBsm, 2, BasepointRule::AtX}, 4.0, 8, SpatialGrid::from_cutoff(100, 0.5)}, Payoff::call(20), &d);
    EXPECT_EQ(d.warnings.size(), 1u);
    bootstrap_solve({KernelSpec{kBsm, 2, BasepointRule::AtX}, 1.0, 10, SpatialGrid::from_cutoff(100, 0.5)}, Payoff::call(20), &d);
    EXPECT_TRUE(d.warnings.empty());
}

TEST(Bootstrap, DeterministicAndValidated) {
    const BootstrapConfig cfg{KernelSpec{Model::cev(0.3, 0.6, 0.1), 2, BasepointRule::Midpoint}, 0.3, 3, SpatialGrid::from_cutoff(50, 0.1)};
    const PriceCurve a = bootstrap_solve(cfg, Payoff::put(20));
    const PriceCurve b = bootstrap_solve(cfg, Payoff::put(20));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_THROW(bootstrap_solve({cfg.spec, 0.3, 0, cfg.grid}, Payoff::put(20)), DomainError);
    EXPECT_THROW(bootstrap_solve({KernelSpec{kBsm, 3}, 0.3, 2, cfg.grid}, Payoff::put(20)), DomainError);
}

TEST(Bootstrap, SampledPayoffUsesQuadratureFirstHop) {
    const SpatialGrid g = SpatialGrid::from_cutoff(200, 0.1);
    const Payoff call = Payoff::call(20);
    BootstrapDiagnostics d;
    const PriceCurve s = bootstrap_solve({KernelSpec{kBsm, 2}, 0.5, 5, g}, Payoff::sampled(g, call.sample(g)), &d);
    EXPECT_FALSE(d.closed_form_first_step);
    EXPECT_LT(linf_vs_bs(s, 0.5), 2e-2);
    // kinks sit on nodes, so the interpolated payoff reproduces the analytic one
    BootstrapConfig analytic{KernelSpec{kBsm, 2}, 0.5, 5, g};
    analytic.closed_form_first_step = false;
    const PriceCurve a = bootstrap_solve(analytic, call);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.node(i) <= 40) {
            EXPECT_NEAR(s[i].value, a[i].value, 1e-3) << "x = " << g.node(i);
        }
}
