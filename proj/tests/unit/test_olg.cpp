#include "recommerce/olg.hpp"
#include "recommerce/two_period.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace recommerce;
using namespace recommerce::olg;

namespace {

// Canonical parameters leave both OLG regimes inactive, so active-case tests use this instance.
ModelParams active_instance()
{
    ModelParams p;
    p.v_low = 0.9;
    p.alpha = 0.95;
    p.beta = 0.1;
    p.delta = 0.5;
    p.n_high = 0.3;
    p.n_low = 0.7;
    return p;
}

ModelParams random_olg(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.v_low = 0.5 + 0.5 * u(rng);
    p.alpha = 0.6 + 0.4 * u(rng);
    p.beta = 0.6 * u(rng);
    p.delta = 0.5 + 0.45 * u(rng);
    p.n_high = 0.1 + 0.5 * u(rng);
    p.n_low = 1.0 - p.n_high;
    return p;
}

}  // namespace

TEST(Olg, EnumerationSizes)
{
    for (auto state : {State::Empty, State::HighOnly, State::Full})
        EXPECT_EQ(enumerate_profiles(state).size(), 81u);
}

TEST(Olg, HighOnlyContainsScreeningProfileOnce)
{
    const auto profiles = enumerate_profiles(State::HighOnly);
    EXPECT_EQ(std::count(profiles.begin(), profiles.end(), screening_profile()), 1);
}

TEST(Olg, EmptyStateHasNoSellAction)
{
    for (const auto& p : enumerate_profiles(State::Empty))
        for (Action a : p.actions)
            EXPECT_NE(a, Action::SellUsedBuyNew);
}

TEST(Olg, FullStateMenusOfferKeepUsed)
{
    for (const auto& cell : kCells) {
        const auto m = menu(State::Full, cell.type, cell.age);
        EXPECT_NE(std::find(m.begin(), m.end(), Action::KeepUsed), m.end());
    }
}

TEST(Olg, ProfileLabel)
{
    EXPECT_EQ(screening_profile().label(), "L2=buy_used;H2=sell_used_buy_new;L1=buy_used;H1=buy_new");
}

TEST(Olg, SteadyPricesMatchTwoPeriodPeriod2)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_olg(rng);
        const double dur = d(rng);
        const auto a = steady_state_prices(p, dur);
        const auto b = two_period::prices(p, dur);
        EXPECT_EQ(a.p_new, b.new_period2);
        EXPECT_EQ(a.p_used, b.used_period2);
    }
    const auto zero = steady_state_prices(canonical_params(), 0.0);
    EXPECT_EQ(zero.p_new, 1.0);
    EXPECT_EQ(zero.p_used, 0.0);
}

TEST(Olg, PerPeriodProfitCanonical)
{
    const auto p = canonical_params();
    const double d = 0.1238;
    const double s = p.s(d);
    const double expected = 0.3 * (0.576 * s + (1 - s) - 0.5 * d * d);
    EXPECT_NEAR(per_period_profit(p, Regime::ThirdParty, d), expected, 1e-15);
    EXPECT_NEAR(per_period_profit(p, Regime::ThirdParty, d), 0.3 * (0.06705 + 0.8836 - 0.00766), 1e-3);
    EXPECT_NEAR(per_period_profit(p, Regime::ThirdParty, d), 0.2828894252, 1e-9);
}

TEST(Olg, BrandedMinusThirdPartyIsCommission)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_olg(rng);
        const double d = 0.02 * i;
        const double diff = per_period_profit(p, Regime::Branded, d) - per_period_profit(p, Regime::ThirdParty, d);
        EXPECT_NEAR(diff, p.n_high * p.alpha * p.beta * p.v_low * p.s(d), 1e-14);
        EXPECT_GE(diff, 0.0);
        const auto split = per_period_breakdown(p, Regime::Branded, d);
        EXPECT_NEAR(split.total(), per_period_profit(p, Regime::Branded, d), 1e-14);
    }
}

TEST(Olg, StreamClosedForm)
{
    auto p = canonical_params();
    p.delta = 0.5;
    EXPECT_DOUBLE_EQ(discounted_stream(p, Regime::Branded, 0.2), per_period_profit(p, Regime::Branded, 0.2));
    p.delta = 1.0;
    EXPECT_THROW(discounted_stream(p, Regime::Branded, 0.2), std::domain_error);
}

TEST(Olg, CanonicalIsInactive)
{
    const auto p = canonical_params();
    for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
        EXPECT_LT(foc_weight(p, r), 0.0);
        const auto sol = optimal_durability_olg(p, r);
        EXPECT_FALSE(sol.active);
        EXPECT_EQ(sol.d_star, 0.0);
        EXPECT_EQ(sol.objective_value, sol.shutdown_value);
    }
}

TEST(Olg, ActiveInstanceSolution)
{
    const auto p = active_instance();
    const auto t = optimal_durability_olg(p, Regime::ThirdParty);
    const auto b = optimal_durability_olg(p, Regime::Branded);
    ASSERT_TRUE(t.steady_state_exists);
    ASSERT_TRUE(b.steady_state_exists);
    EXPECT_NEAR(foc_weight(p, Regime::ThirdParty), 0.077125, 1e-12);
    EXPECT_NEAR(foc_weight(p, Regime::Branded), 0.119875, 1e-12);
    EXPECT_NEAR(t.d_star, 0.07178, 1e-5);
    EXPECT_NEAR(b.d_star, 0.10764, 1e-5);
    EXPECT_GT(b.d_star, t.d_star);
    EXPECT_EQ(*b.state, State::HighOnly);
    EXPECT_EQ(*b.profile, screening_profile());
    EXPECT_NEAR(b.used_market.rationed_fraction, 0.3 / 1.4, 1e-15);
    EXPECT_LT(b.used_market.supply, b.used_market.demand);
}

TEST(Olg, ObjectiveFocIsStationary)
{
    const auto p = active_instance();
    for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
        const double d = optimal_durability_olg(p, r).d_star;
        const double h = 1e-6;
        EXPECT_NEAR((objective(p, r, d + h) - objective(p, r, d - h)) / (2 * h), 0.0, 1e-8);
    }
}

TEST(Olg, StreamOnlyIsCorner)
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_olg(rng);
        for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
            EXPECT_LT(foc_weight(p, r, Objective::StreamOnly), 0.0);
            const auto sol = solve_unchecked(p, r, {}, Objective::StreamOnly);
            EXPECT_EQ(sol.d_star, 0.0);
        }
    }
}

TEST(Olg, BetaZeroRegimesCoincide)
{
    auto p = active_instance();
    p.beta = 0.0;
    const auto t = optimal_durability_olg(p, Regime::ThirdParty);
    const auto b = optimal_durability_olg(p, Regime::Branded);
    EXPECT_DOUBLE_EQ(t.d_star, b.d_star);
    EXPECT_DOUBLE_EQ(t.objective_value, b.objective_value);
    EXPECT_DOUBLE_EQ(t.p_new, b.p_new);
}

TEST(Olg, CanonicalConstraintsAtPointTwelve)
{
    const auto p = canonical_params();
    const auto rep = check_steady_state(p, Regime::ThirdParty, 0.12, State::HighOnly, screening_profile());
    EXPECT_TRUE(rep.state_consistent);
    EXPECT_TRUE(rep.market_clears);
    EXPECT_TRUE(rep.constraints_hold);
    EXPECT_TRUE(rep.entry_ratio_holds);
    EXPECT_TRUE(rep.best_responses);
}

TEST(Olg, FullStateBothBuyNewIsDominated)
{
    const auto p = active_instance();
    const ActionProfile both_new{{Action::KeepUsed, Action::KeepUsed, Action::BuyNew, Action::BuyNew}};
    const auto rep = check_steady_state(p, Regime::Branded, 0.1, State::Full, both_new);
    EXPECT_TRUE(rep.state_consistent);
    EXPECT_TRUE(rep.dominated);
    EXPECT_FALSE(rep.passes());
    EXPECT_FALSE(rep.dominance_reason.empty());
}

TEST(Olg, HighKeepsUsedFails)
{
    const auto p = active_instance();
    const ActionProfile keep{{Action::DoNothing, Action::KeepUsed, Action::DoNothing, Action::BuyNew}};
    const auto rep = check_steady_state(p, Regime::ThirdParty, 0.07, State::HighOnly, keep);
    EXPECT_TRUE(!rep.state_consistent || rep.dominated);
    EXPECT_TRUE(rep.dominated);
}

TEST(Olg, UniqueSteadyStateOnActiveInstance)
{
    const auto p = active_instance();
    for (Regime r : {Regime::ThirdParty, Regime::Branded}) {
        const double d = optimal_durability_olg(p, r).d_star;
        int passing = 0;
        for (auto state : {State::Empty, State::HighOnly, State::Full})
            for (const auto& profile : enumerate_profiles(state))
                if (check_steady_state(p, r, d, state, profile).passes()) {
                    ++passing;
                    EXPECT_EQ(state, State::HighOnly);
                    EXPECT_EQ(profile, screening_profile());
                }
        EXPECT_EQ(passing, 1);
    }
}

TEST(Olg, ImplicationChainOnRandomDraws)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_olg(rng);
        const double dur = d(rng);
        const auto c = steady_conditions(p, dur, steady_state_prices(p, dur));
        if (c.high_age2.holds(1e-12))
            EXPECT_TRUE(c.high_age1.holds(1e-12));
        if (c.low_age1.holds(1e-12))
            EXPECT_TRUE(c.low_age2.holds(1e-12));
        EXPECT_TRUE(c.high_age2.binds(1e-12));
        EXPECT_TRUE(c.low_ir.binds(1e-12));
    }
}

TEST(Olg, RatioConditionFailureIsFlagged)
{
    ModelParams p;
    p.v_low = 0.99;
    p.alpha = 1.0;
    p.beta = 0.0;
    p.delta = 0.5;
    p.n_high = 0.3;
    p.n_low = 0.7;
    const auto sol = optimal_durability_olg(p, Regime::Branded);
    ASSERT_TRUE(sol.active);
    EXPECT_FALSE(sol.entry_ratio_holds);
    EXPECT_FALSE(sol.steady_state_exists);
    EXPECT_EQ(sol.note, "no active OLG steady state at D*");
    ASSERT_TRUE(sol.best_feasible_d.has_value());
    EXPECT_LT(*sol.best_feasible_d, sol.d_star);
}

TEST(Olg, ValidationRejectsTwoPeriodOnlyShares)
{
    auto p = canonical_params();
    p.n_high = 0.8;
    p.n_low = 0.2;
    EXPECT_THROW(optimal_durability_olg(p, Regime::Branded), ValidationError);
}
