#include "recommerce/olg.hpp"
#include "recommerce/oracle.hpp"
#include "recommerce/statics.hpp"
#include "recommerce/two_period.hpp"

#include <benchmark/benchmark.h>

using namespace recommerce;

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

void BM_FocRoot(benchmark::State& state)
{
    const auto p = canonical_params();
    for (auto _ : state)
        benchmark::DoNotOptimize(two_period::optimal_durability(p, Regime::Branded));
}
BENCHMARK(BM_FocRoot);

void BM_SolveTwoPeriod(benchmark::State& state)
{
    const auto p = canonical_params();
    for (auto _ : state)
        benchmark::DoNotOptimize(two_period::solve(p, Regime::ThirdParty));
}
BENCHMARK(BM_SolveTwoPeriod);

void BM_GridTable(benchmark::State& state)
{
    const auto p = canonical_params();
    const oracle::GridSpec grid{10.0, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::GridTable::build(p.cost, p.quality, grid));
}
BENCHMARK(BM_GridTable)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_GridArgmax(benchmark::State& state)
{
    const auto p = canonical_params();
    const auto table = oracle::GridTable::build(p.cost, p.quality, {10.0, static_cast<std::size_t>(state.range(0))});
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::grid_argmax_profit(p, Regime::Branded, ModelKind::TwoPeriod, table));
}
BENCHMARK(BM_GridArgmax)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_OlgSolve(benchmark::State& state)
{
    const auto p = olg_active();
    for (auto _ : state)
        benchmark::DoNotOptimize(olg::optimal_durability_olg(p, Regime::Branded));
}
BENCHMARK(BM_OlgSolve)->Unit(benchmark::kMicrosecond);

void BM_OlgEnumerateAll(benchmark::State& state)
{
    const auto p = olg_active();
    const double d = olg::optimal_durability_olg(p, Regime::Branded).d_star;
    for (auto _ : state) {
        int passing = 0;
        for (auto s : {olg::State::Empty, olg::State::HighOnly, olg::State::Full})
            for (const auto& profile : olg::enumerate_profiles(s))
                passing += olg::check_steady_state(p, Regime::Branded, d, s, profile).passes();
        benchmark::DoNotOptimize(passing);
    }
}
BENCHMARK(BM_OlgEnumerateAll)->Unit(benchmark::kMicrosecond);

void BM_CommissionGrid(benchmark::State& state)
{
    const auto p = canonical_params();
    for (auto _ : state)
        benchmark::DoNotOptimize(statics::optimal_commission(p));
}
BENCHMARK(BM_CommissionGrid)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
