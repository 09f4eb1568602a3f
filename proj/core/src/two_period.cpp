#include "recommerce/two_period.hpp"

#include <algorithm>

namespace recommerce::two_period {

std::string_view to_string(MarketMode mode)
{
    switch (mode) {
    case MarketMode::ActivePreOwned: return "active";
    case MarketMode::Shutdown: return "shutdown";
    case MarketMode::IcViolated: return "ic_violated";
    }
    return "unknown";
}

double social_optimal_durability(const ModelParams& params, const SolverOptions& opts)
{
    const double weight = params.delta / (1.0 + params.delta) * params.v_low;
    return durability_foc_root(params, weight, opts);
}

double activity_margin(const ModelParams& p, Regime regime)
{
    if (regime == Regime::Branded)
        return p.alpha * (2.0 - p.beta) * p.v_low - p.v_high;
    return 2.0 * p.alpha * (1.0 - p.beta) * p.v_low - p.v_high;
}

Activity activity_threshold(const ModelParams& params, Regime regime)
{
    return activity_margin(params, regime) > 0.0 ? Activity::Active : Activity::Shutdown;
}

double optimal_durability(const ModelParams& params, Regime regime, const SolverOptions& opts)
{
    const double margin = activity_margin(params, regime);
    if (!(margin > 0.0))
        throw InactiveRegimeError();
    return durability_foc_root(params, params.delta / (1.0 + params.delta) * margin, opts);
}

Prices prices(const ModelParams& p, double d)
{
    const double s = p.s(d);
    Prices out;
    out.used_period2 = p.alpha * p.v_low * s;
    out.new_period2 = p.alpha * (1.0 - p.beta) * p.v_low * s + p.v_high * (1.0 - s);
    out.new_period1 = p.v_high + p.delta * p.alpha * (1.0 - p.beta) * p.v_low * s;
    return out;
}

ProfitBreakdown profit(const ModelParams& p, Regime regime, double d)
{
    const double c = p.c(d);
    const Prices pr = prices(p, d);
    ProfitBreakdown out;
    out.period1 = p.n_high * (pr.new_period1 - c);
    out.commission = regime == Regime::Branded ? p.n_high * p.beta * pr.used_period2 : 0.0;
    out.period2 = p.n_high * (pr.new_period2 - c) + out.commission;
    out.total = out.period1 + p.delta * out.period2;
    return out;
}

double welfare(const ModelParams& p, double d)
{
    return (1.0 + p.delta) * p.n_high * p.v_high + p.delta * p.n_high * p.v_low * p.s(d) -
           (1.0 + p.delta) * p.n_high * p.c(d);
}

ScreeningConditions screening_conditions(const ModelParams& p, double d, const Prices& pr)
{
    const double s = p.s(d);
    const double pn = pr.new_period2;
    const double pu = pr.used_period2;
    ScreeningConditions out;
    out.high_ic = {"type-H IC", (p.v_high - pn + (1.0 - p.beta) * pu) - p.v_high * s};
    out.low_ic = {"type-L IC", (p.alpha * p.v_low * s - pu) - (p.v_low - pn)};
    out.high_ir = {"type-H IR", p.v_high - pn};
    out.low_ir = {"type-L IR", p.alpha * p.v_low * s - pu};
    out.high_period1_ir = {"type-H period-1 IR",
                           p.v_high + p.delta * (1.0 - p.beta) * pu - pr.new_period1};
    return out;
}

namespace {

TwoPeriodEquilibrium shutdown(const ModelParams& p, TwoPeriodEquilibrium eq)
{
    eq.mode = MarketMode::Shutdown;
    eq.d_star = 0.0;
    eq.p1n = p.v_high;
    eq.p2n = p.v_high;
    eq.p2u.reset();
    eq.profit = ProfitBreakdown{eq.shutdown_profit, p.n_high * p.v_high, p.n_high * p.v_high, 0.0};
    eq.welfare = welfare(p, 0.0);
    eq.conditions = screening_conditions(p, 0.0, prices(p, 0.0));
    return eq;
}

}  // namespace

TwoPeriodEquilibrium solve_unchecked(const ModelParams& p, Regime regime, const SolverOptions& opts)
{
    TwoPeriodEquilibrium eq;
    eq.regime = regime;
    eq.d_social = social_optimal_durability(p, opts);
    eq.activity_margin = activity_margin(p, regime);
    eq.shutdown_profit = (1.0 + p.delta) * p.n_high * p.v_high;

    if (activity_threshold(p, regime) == Activity::Shutdown) {
        eq.active_profit = eq.shutdown_profit;
        eq.profit_tie = eq.activity_margin == 0.0;
        return shutdown(p, eq);
    }

    const double d = optimal_durability(p, regime, opts);
    eq.active_profit = profit(p, regime, d).total;
    if (eq.active_profit <= eq.shutdown_profit) {
        eq.profit_tie = eq.active_profit == eq.shutdown_profit;
        return shutdown(p, eq);
    }

    const Prices pr = prices(p, d);
    eq.d_star = d;
    eq.p1n = pr.new_period1;
    eq.p2n = pr.new_period2;
    eq.p2u = pr.used_period2;
    eq.profit = profit(p, regime, d);
    eq.welfare = welfare(p, d);
    eq.conditions = screening_conditions(p, d, pr);
    eq.mode = MarketMode::ActivePreOwned;

    if (!eq.conditions.low_ic.holds(opts.constraint_tolerance)) {
        eq.mode = MarketMode::IcViolated;
        // Type-L IC <=> s(D) <= (v_H - v_L) / (v_H - alpha (1-beta) v_L).
        const double bound =
            (p.v_high - p.v_low) / (p.v_high - p.alpha * (1.0 - p.beta) * p.v_low);
        eq.best_feasible_d = std::min(d, quality_inverse(p.quality, bound, opts.d_max));
    }
    return eq;
}

TwoPeriodEquilibrium solve(const ModelParams& params, Regime regime, const SolverOptions& opts)
{
    auto report = validate_params(params, ModelKind::TwoPeriod, opts.d_max);
    if (!report.ok())
        throw ValidationError(std::move(report));
    return solve_unchecked(params, regime, opts);
}

}  // namespace recommerce::two_period
