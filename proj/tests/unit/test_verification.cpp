#include "recommerce/verification.hpp"

#include <gtest/gtest.h>

using namespace recommerce;
using namespace recommerce::verification;

namespace {

VerifyConfig small_config()
{
    VerifyConfig cfg;
    cfg.seed = 7;
    cfg.draws = 40;
    cfg.audit_draws = 20;
    cfg.oracle_draws = 10;
    cfg.oracle_grid_points = 20000;
    cfg.commission_points = 101;
    return cfg;
}

}  // namespace

TEST(Verification, SampleStaysInBox)
{
    std::mt19937_64 rng(1);
    const DrawBox box;
    for (int i = 0; i < 2000; ++i) {
        const auto p = sample_params(rng, ModelKind::TwoPeriod, box);
        EXPECT_GE(p.v_low, 0.5);
        EXPECT_LT(p.v_low, 1.0);
        EXPECT_GE(p.alpha, 0.6);
        EXPECT_LE(p.alpha, 1.0);
        EXPECT_LE(p.beta, 0.6);
        EXPECT_GE(p.delta, 0.5);
        EXPECT_LE(p.delta, 0.95);
        EXPECT_GT(p.n_low, p.n_high);
        EXPECT_DOUBLE_EQ(p.n_low + p.n_high, 1.0);
    }
}

TEST(Verification, SmallSuitePasses)
{
    const auto report = run(small_config());
    ASSERT_EQ(report.results.size(), default_suite().size());
    for (const auto& r : report.results) {
        EXPECT_TRUE(r.passed()) << name(r.property);
        EXPECT_GT(r.checks, 0) << name(r.property);
    }
    EXPECT_TRUE(report.all_passed());
}

TEST(Verification, DeterministicAcrossJobCounts)
{
    auto cfg = small_config();
    cfg.properties = {Property::RegimeOrdering, Property::AlphaIncentive, Property::SteadyStateUniqueness};
    const auto a = run(cfg);
    cfg.jobs = 3;
    const auto b = run(cfg);
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        EXPECT_EQ(a.results[i].draws, b.results[i].draws);
        EXPECT_EQ(a.results[i].rejected, b.results[i].rejected);
        EXPECT_EQ(a.results[i].checks, b.results[i].checks);
    }
}

TEST(Verification, DifferentSeedsDrawDifferently)
{
    auto cfg = small_config();
    cfg.properties = {Property::RegimeOrdering};
    const auto a = run(cfg);
    cfg.seed = 8;
    const auto b = run(cfg);
    EXPECT_NE(a.results[0].rejected, b.results[0].rejected);
}

TEST(Verification, InvertedSelfTestFailsWithCounterexample)
{
    auto cfg = small_config();
    cfg.properties = {};
    cfg.invert_self_test = true;
    const auto report = run(cfg);
    ASSERT_EQ(report.results.size(), 1u);
    EXPECT_FALSE(report.all_passed());
    EXPECT_FALSE(report.results[0].counterexamples.empty());
}

TEST(Verification, EmptyRunThrows)
{
    auto cfg = small_config();
    cfg.draws = 0;
    EXPECT_THROW(run(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.properties = {};
    EXPECT_THROW(run(cfg), std::invalid_argument);
}

TEST(Verification, BothActiveMatchesModels)
{
    EXPECT_TRUE(both_active(canonical_params(), ModelKind::TwoPeriod));
    EXPECT_FALSE(both_active(canonical_params(), ModelKind::Olg));
}
