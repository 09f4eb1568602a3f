#include "recommerce/oracle.hpp"
#include "recommerce/statics.hpp"
#include "recommerce/two_period.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace recommerce;
using namespace recommerce::oracle;

namespace {

ModelParams olg_active()
{
    ModelParams p;
    p.v_low = 0.9;
    p.alpha = 0.95;
    p.beta = 0.1;
    p.delta = 0.5;
    return p;
}

}  // namespace

TEST(Oracle, GridSpecValidation)
{
    EXPECT_THROW((GridSpec{10.0, 999}.validate()), std::invalid_argument);
    EXPECT_THROW((GridSpec{0.0, 1000}.validate()), std::invalid_argument);
    const GridSpec g{10.0, 1001};
    EXPECT_DOUBLE_EQ(g.step(), 0.01);
    EXPECT_EQ(g.at(0), 0.0);
    EXPECT_EQ(g.at(1000), 10.0);
}

TEST(Oracle, CanonicalArgmaxWithinOneStep)
{
    const auto p = canonical_params();
    const GridSpec grid{10.0, 1000000};
    const auto table = GridTable::build(p.cost, p.quality, grid);
    const auto t = grid_argmax_profit(p, Regime::ThirdParty, ModelKind::TwoPeriod, table);
    const auto b = grid_argmax_profit(p, Regime::Branded, ModelKind::TwoPeriod, table);
    const auto w = grid_argmax_welfare(p, table);
    EXPECT_NEAR(t.d_hat, 0.06731007, 1e-7);
    EXPECT_NEAR(b.d_hat, 0.12387012, 1e-7);
    EXPECT_NEAR(w.d_hat, 0.28498028, 1e-7);
    EXPECT_LE(std::abs(t.d_hat - two_period::optimal_durability(p, Regime::ThirdParty)), t.step);
    EXPECT_LE(std::abs(b.d_hat - two_period::optimal_durability(p, Regime::Branded)), b.step);
    EXPECT_LE(std::abs(w.d_hat - two_period::social_optimal_durability(p)), w.step);
}

TEST(Oracle, ObjectiveMatchesSolverProfit)
{
    const auto p = canonical_params();
    for (double d : {0.0, 0.05, 0.3, 2.0})
        for (Regime r : {Regime::ThirdParty, Regime::Branded})
            EXPECT_NEAR(profit_objective(p, r, ModelKind::TwoPeriod, p.c(d), p.s(d)),
                        two_period::profit(p, r, d).total, 1e-14);
}

TEST(Oracle, ShutdownArgmaxIsZero)
{
    auto p = canonical_params();
    p.alpha = 0.6;
    p.beta = 0.5;
    const auto t = grid_argmax_profit(p, Regime::ThirdParty, ModelKind::TwoPeriod, GridSpec{10.0, 10000});
    EXPECT_EQ(t.d_hat, 0.0);
    EXPECT_EQ(t.index, 0u);
    const auto o = grid_argmax_profit(canonical_params(), Regime::Branded, ModelKind::Olg, GridSpec{10.0, 10000});
    EXPECT_EQ(o.d_hat, 0.0);
}

TEST(Oracle, OlgArgmaxAgreesWithSolver)
{
    const auto p = olg_active();
    const GridSpec grid{10.0, 100000};
    for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
        const auto hat = grid_argmax_profit(p, r, ModelKind::Olg, grid);
        const double d = statics::optimal_value(p, ModelKind::Olg, r).d_star;
        EXPECT_LE(std::abs(hat.d_hat - d), hat.step);
    }
}

TEST(Oracle, SingleCrossingInActiveRegion)
{
    const auto p = canonical_params();
    const auto table = GridTable::build(p.cost, p.quality, GridSpec{10.0, 100000});
    for (Regime r : {Regime::ThirdParty, Regime::Branded})
        EXPECT_EQ(slope_sign_changes(p, r, ModelKind::TwoPeriod, table), 1u);
}

TEST(Oracle, AuditScreeningProfilePasses)
{
    const auto p = canonical_params();
    const auto prices = olg::steady_state_prices(p, 0.12);
    const auto audit = best_response_audit(p, 0.12, prices, olg::State::HighOnly, olg::screening_profile());
    EXPECT_TRUE(audit.passes());
    for (const auto& c : audit.cells)
        EXPECT_TRUE(c.passes) << c.cell;
}

TEST(Oracle, AuditRejectsLowTypeBuyingNew)
{
    const auto p = canonical_params();
    const auto prices = olg::steady_state_prices(p, 0.12);
    using olg::Action;
    const olg::ActionProfile profile{{Action::BuyNew, Action::SellUsedBuyNew, Action::BuyUsed, Action::BuyNew}};
    const auto audit = best_response_audit(p, 0.12, prices, olg::State::HighOnly, profile);
    EXPECT_FALSE(audit.passes());
    EXPECT_FALSE(audit.cells[0].passes);
    EXPECT_EQ(audit.cells[0].best_alternative, "buy_used");
}

TEST(Oracle, TruncatedStream)
{
    auto p = canonical_params();
    const double flow = olg::per_period_profit(p, Regime::Branded, 0.1);
    EXPECT_DOUBLE_EQ(truncated_stream(p, Regime::Branded, 0.1, 1), p.delta * flow);
    const double closed = olg::discounted_stream(p, Regime::Branded, 0.1);
    EXPECT_LE(std::abs(truncated_stream(p, Regime::Branded, 0.1, 500) - closed),
              std::pow(p.delta, 501) / (1 - p.delta) * flow + 1e-14);
    p.delta = 0.5;
    const double c2 = olg::discounted_stream(p, Regime::ThirdParty, 0.1);
    EXPECT_LE(std::abs(truncated_stream(p, Regime::ThirdParty, 0.1, 50) - c2) / c2, 1e-15);
    EXPECT_THROW(truncated_stream(p, Regime::Branded, 0.1, 0), std::invalid_argument);
}
