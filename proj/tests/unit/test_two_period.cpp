#include "recommerce/two_period.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace recommerce;
using namespace recommerce::two_period;

namespace {

// Frozen from an independent fixed-point solve of the FOCs and a 10^6-point grid.
constexpr double kDThirdParty = 0.06731298335555855;
constexpr double kDBranded = 0.1238746759324309;
constexpr double kDSocial = 0.2849796281831167;

}  // namespace

TEST(TwoPeriod, CanonicalDurabilities)
{
    const auto p = canonical_params();
    EXPECT_NEAR(optimal_durability(p, Regime::ThirdParty), kDThirdParty, 1e-9);
    EXPECT_NEAR(optimal_durability(p, Regime::Branded), kDBranded, 1e-9);
    EXPECT_NEAR(social_optimal_durability(p), kDSocial, 1e-9);
    EXPECT_NEAR(optimal_durability(p, Regime::Branded) - optimal_durability(p, Regime::ThirdParty),
                0.0565, 2e-3);
}

TEST(TwoPeriod, CanonicalPricesAtBrandedOptimum)
{
    const auto p = canonical_params();
    const auto pr = prices(p, kDBranded);
    EXPECT_NEAR(p.s(kDBranded), 0.11650944, 1e-8);
    EXPECT_NEAR(pr.used_period2, 0.08388680, 1e-8);
    EXPECT_NEAR(pr.new_period2, 0.95060000, 1e-8);
    EXPECT_NEAR(pr.new_period1, 1.06039850, 1e-8);
}

TEST(TwoPeriod, CanonicalProfitsAndWelfare)
{
    const auto p = canonical_params();
    EXPECT_NEAR(profit(p, Regime::ThirdParty, kDBranded).total, 0.57040824, 1e-8);
    EXPECT_NEAR(profit(p, Regime::Branded, kDBranded).total, 0.57493813, 1e-8);
    EXPECT_NEAR(profit(p, Regime::ThirdParty, kDThirdParty).total, 0.57138025, 1e-8);
    EXPECT_NEAR(profit(p, Regime::Branded, kDThirdParty).total, 0.57391124, 1e-8);
    EXPECT_NEAR(welfare(p, kDThirdParty), 0.58276970, 1e-8);
    EXPECT_NEAR(welfare(p, kDBranded), 0.59079273, 1e-8);
    EXPECT_NEAR(welfare(p, kDSocial), 0.60041580, 1e-8);
}

TEST(TwoPeriod, CommissionRevenueIsBrandedOnly)
{
    const auto p = canonical_params();
    const auto t = profit(p, Regime::ThirdParty, 0.1);
    const auto b = profit(p, Regime::Branded, 0.1);
    EXPECT_EQ(t.commission, 0.0);
    EXPECT_NEAR(b.commission, p.n_high * p.beta * p.alpha * p.v_low * p.s(0.1), 1e-15);
    EXPECT_NEAR(b.total - t.total, p.delta * b.commission, 1e-15);
}

TEST(TwoPeriod, SolveCanonical)
{
    const auto p = canonical_params();
    for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
        const auto eq = solve(p, r);
        EXPECT_EQ(eq.mode, MarketMode::ActivePreOwned);
        EXPECT_TRUE(eq.p2u.has_value());
        EXPECT_GT(eq.sustainability_gap(), 0.0);
        for (const auto& c : eq.conditions.all())
            EXPECT_TRUE(c.holds(1e-9)) << c.name;
        EXPECT_TRUE(eq.conditions.high_ic.binds(1e-9));
        EXPECT_TRUE(eq.conditions.low_ir.binds(1e-9));
    }
}

TEST(TwoPeriod, ProfitFocIsStationary)
{
    const auto p = canonical_params();
    for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
        const double d = optimal_durability(p, r);
        const double h = 1e-6;
        const double slope = (profit(p, r, d + h).total - profit(p, r, d - h).total) / (2 * h);
        EXPECT_NEAR(slope, 0.0, 1e-8);
    }
}

TEST(TwoPeriod, ShutdownBelowThreshold)
{
    auto p = canonical_params();
    p.alpha = 0.6;
    p.beta = 0.5;
    ASSERT_LE(activity_margin(p, Regime::ThirdParty), 0.0);
    EXPECT_THROW(optimal_durability(p, Regime::ThirdParty), InactiveRegimeError);
    const auto eq = solve(p, Regime::ThirdParty);
    EXPECT_EQ(eq.mode, MarketMode::Shutdown);
    EXPECT_EQ(eq.d_star, 0.0);
    EXPECT_EQ(eq.p1n, p.v_high);
    EXPECT_FALSE(eq.p2u.has_value());
    EXPECT_NEAR(eq.profit.total, (1 + p.delta) * p.n_high * p.v_high, 1e-15);
}

TEST(TwoPeriod, MarginExactlyZeroIsShutdown)
{
    auto p = canonical_params();
    p.beta = 0.0;
    p.alpha = 0.625;  // 2 * 0.625 * 0.8 = 1 = v_H
    EXPECT_EQ(activity_margin(p, Regime::ThirdParty), 0.0);
    EXPECT_EQ(activity_threshold(p, Regime::ThirdParty), Activity::Shutdown);
    EXPECT_TRUE(solve(p, Regime::ThirdParty).profit_tie);
}

TEST(TwoPeriod, IcViolationIsFlagged)
{
    auto p = canonical_params();
    p.v_low = 0.99;
    p.alpha = 0.95;
    p.beta = 0.0;
    p.delta = 0.95;
    const auto eq = solve(p, Regime::Branded);
    ASSERT_EQ(eq.mode, MarketMode::IcViolated);
    ASSERT_TRUE(eq.best_feasible_d.has_value());
    EXPECT_LT(*eq.best_feasible_d, eq.d_star);
    const auto at = screening_conditions(p, *eq.best_feasible_d, prices(p, *eq.best_feasible_d));
    EXPECT_TRUE(at.low_ic.holds(1e-9));
}

TEST(TwoPeriod, BetaZeroRegimesCoincide)
{
    auto p = canonical_params();
    p.beta = 0.0;
    const auto t = solve(p, Regime::ThirdParty);
    const auto b = solve(p, Regime::Branded);
    EXPECT_DOUBLE_EQ(t.d_star, b.d_star);
    EXPECT_DOUBLE_EQ(t.profit.total, b.profit.total);
}

TEST(TwoPeriod, InvalidParamsThrow)
{
    auto p = canonical_params();
    p.delta = 1.0;
    EXPECT_THROW(solve(p, Regime::Branded), ValidationError);
}

TEST(TwoPeriod, RandomDrawsKeepMarginOrdering)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(0.6, 1.0), b(0.001, 0.6);
    for (int i = 0; i < 500; ++i) {
        auto p = canonical_params();
        p.alpha = a(rng);
        p.beta = b(rng);
        EXPECT_GT(activity_margin(p, Regime::Branded), activity_margin(p, Regime::ThirdParty));
    }
}
