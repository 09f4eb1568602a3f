#include "recommerce/olg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace recommerce::olg {

namespace {

constexpr double kTieTolerance = 1e-12;

constexpr std::array<Action, 3> kNonOwnerMenu = {Action::BuyNew, Action::BuyUsed,
                                                 Action::DoNothing};
constexpr std::array<Action, 3> kOwnerMenu = {Action::SellUsedBuyNew, Action::BuyNew,
                                              Action::KeepUsed};

std::size_t cell_index(ConsumerType type, Age age)
{
    for (std::size_t i = 0; i < kCells.size(); ++i)
        if (kCells[i].type == type && kCells[i].age == age)
            return i;
    return 0;
}

/// Higher wins when surpluses tie: trading beats not trading.
int tie_priority(Action a)
{
    switch (a) {
    case Action::SellUsedBuyNew: return 4;
    case Action::BuyUsed: return 3;
    case Action::BuyNew: return 2;
    case Action::KeepUsed: return 1;
    case Action::DoNothing: return 0;
    }
    return 0;
}

bool buys_new(Action a)
{
    return a == Action::BuyNew || a == Action::SellUsedBuyNew;
}

double mass(const ModelParams& p, ConsumerType type)
{
    return type == ConsumerType::High ? p.n_high : p.n_low;
}

double valuation(const ModelParams& p, ConsumerType type)
{
    return type == ConsumerType::High ? p.v_high : p.v_low;
}

struct SurplusContext {
    double v;
    double s;
    const ModelParams& p;
    SteadyPrices prices;

    double owner_age2(Action a) const
    {
        switch (a) {
        case Action::SellUsedBuyNew: return v - prices.p_new + (1.0 - p.beta) * prices.p_used;
        case Action::BuyNew: return v - prices.p_new;
        case Action::KeepUsed: return v * s;
        // Not on an owner's menu; an owner could still discard and act as a non-owner.
        case Action::BuyUsed: return p.alpha * v * s - prices.p_used;
        case Action::DoNothing: return 0.0;
        }
        return 0.0;
    }

    double non_owner_age2(Action a) const
    {
        switch (a) {
        case Action::BuyNew:
        case Action::SellUsedBuyNew: return v - prices.p_new;
        case Action::BuyUsed: return p.alpha * v * s - prices.p_used;
        case Action::DoNothing:
        case Action::KeepUsed: return 0.0;
        }
        return 0.0;
    }

    double best_owner_age2() const
    {
        return std::max({owner_age2(Action::SellUsedBuyNew), owner_age2(Action::BuyNew),
                         owner_age2(Action::KeepUsed)});
    }

    double best_non_owner_age2() const
    {
        return std::max({non_owner_age2(Action::BuyNew), non_owner_age2(Action::BuyUsed), 0.0});
    }

    double age1(Action a) const
    {
        switch (a) {
        case Action::BuyNew:
        case Action::SellUsedBuyNew: return v - prices.p_new + p.delta * best_owner_age2();
        case Action::BuyUsed:
            return p.alpha * v * s - prices.p_used + p.delta * best_non_owner_age2();
        case Action::DoNothing:
        case Action::KeepUsed: return p.delta * best_non_owner_age2();
        }
        return 0.0;
    }
};

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

std::string_view to_string(State state)
{
    switch (state) {
    case State::Empty: return "0";
    case State::HighOnly: return "n_H";
    case State::Full: return "1";
    }
    return "?";
}

std::string_view to_string(Action action)
{
    switch (action) {
    case Action::BuyNew: return "buy_new";
    case Action::BuyUsed: return "buy_used";
    case Action::DoNothing: return "do_nothing";
    case Action::SellUsedBuyNew: return "sell_used_buy_new";
    case Action::KeepUsed: return "keep_used";
    }
    return "?";
}

std::string_view to_string(Objective objective)
{
    return objective == Objective::StreamOnly ? "stream_only" : "first_period_plus_stream";
}

double state_fraction(State state, const ModelParams& params)
{
    switch (state) {
    case State::Empty: return 0.0;
    case State::HighOnly: return params.n_high;
    case State::Full: return 1.0;
    }
    return 0.0;
}

std::string cell_label(const Cell& cell)
{
    std::string out = cell.type == ConsumerType::High ? "H" : "L";
    out += cell.age == Age::Two ? "2" : "1";
    return out;
}

Action ActionProfile::at(ConsumerType type, Age age) const
{
    return actions[cell_index(type, age)];
}

std::string ActionProfile::label() const
{
    std::string out;
    for (std::size_t i = 0; i < kCells.size(); ++i) {
        if (i)
            out += ';';
        out += cell_label(kCells[i]);
        out += '=';
        out += to_string(actions[i]);
    }
    return out;
}

ActionProfile screening_profile()
{
    return ActionProfile{{Action::BuyUsed, Action::SellUsedBuyNew, Action::BuyUsed, Action::BuyNew}};
}

bool owns_used_good(State state, ConsumerType type, Age age)
{
    if (age == Age::One)
        return false;
    switch (state) {
    case State::Empty: return false;
    case State::HighOnly: return type == ConsumerType::High;
    case State::Full: return true;
    }
    return false;
}

std::span<const Action> menu(State state, ConsumerType type, Age age)
{
    // With x = 1 every cell faces the owner menu, entering cohort included.
    if (state == State::Full)
        return kOwnerMenu;
    if (state == State::HighOnly && type == ConsumerType::High && age == Age::Two)
        return kOwnerMenu;
    return kNonOwnerMenu;
}

std::vector<ActionProfile> enumerate_profiles(State state)
{
    std::vector<ActionProfile> out;
    const auto m0 = menu(state, kCells[0].type, kCells[0].age);
    const auto m1 = menu(state, kCells[1].type, kCells[1].age);
    const auto m2 = menu(state, kCells[2].type, kCells[2].age);
    const auto m3 = menu(state, kCells[3].type, kCells[3].age);
    out.reserve(m0.size() * m1.size() * m2.size() * m3.size());
    for (Action a0 : m0)
        for (Action a1 : m1)
            for (Action a2 : m2)
                for (Action a3 : m3)
                    out.push_back(ActionProfile{{a0, a1, a2, a3}});
    return out;
}

SteadyPrices steady_state_prices(const ModelParams& p, double d)
{
    const double s = p.s(d);
    SteadyPrices out;
    out.p_used = p.alpha * p.v_low * s;
    out.p_new = p.alpha * (1.0 - p.beta) * p.v_low * s + p.v_high * (1.0 - s);
    return out;
}

PerPeriodProfit per_period_breakdown(const ModelParams& p, Regime regime, double d)
{
    const double s = p.s(d);
    PerPeriodProfit out;
    out.sales = p.n_high * (p.alpha * (1.0 - p.beta) * p.v_low * s + p.v_high * (1.0 - s) - p.c(d));
    if (regime == Regime::Branded)
        out.commission = p.n_high * p.alpha * p.beta * p.v_low * s;
    return out;
}

double per_period_profit(const ModelParams& p, Regime regime, double d)
{
    const double s = p.s(d);
    const double used_share =
        regime == Regime::Branded ? p.alpha * p.v_low * s : p.alpha * (1.0 - p.beta) * p.v_low * s;
    return p.n_high * (used_share + p.v_high * (1.0 - s) - p.c(d));
}

double discounted_stream(const ModelParams& p, Regime regime, double d)
{
    if (!(p.delta > 0.0 && p.delta < 1.0))
        throw std::domain_error("discounted_stream: delta must lie in (0, 1)");
    return p.delta / (1.0 - p.delta) * per_period_profit(p, regime, d);
}

double first_period_price(const ModelParams& p, double d)
{
    return p.v_high + p.delta * p.alpha * (1.0 - p.beta) * p.v_low * p.s(d);
}

double first_period_profit(const ModelParams& p, double d)
{
    return p.n_high * (first_period_price(p, d) - p.c(d));
}

double objective(const ModelParams& p, Regime regime, double d, Objective which)
{
    const double stream = discounted_stream(p, regime, d);
    return which == Objective::StreamOnly ? stream : first_period_profit(p, d) + stream;
}

double foc_weight(const ModelParams& p, Regime regime, Objective which)
{
    const double resale = p.alpha * (1.0 - p.beta) * p.v_low;
    const double used_share = regime == Regime::Branded ? p.alpha * p.v_low : resale;
    if (which == Objective::StreamOnly)
        return used_share - p.v_high;
    return p.delta * ((1.0 - p.delta) * resale + used_share - p.v_high);
}

SteadyConditions steady_conditions(const ModelParams& p, double d, const SteadyPrices& pr)
{
    const double s = p.s(d);
    const double pn = pr.p_new;
    const double pu = pr.p_used;
    const double resale = (1.0 - p.beta) * pu;

    SteadyConditions out;
    out.high_age2 = {"type-H age 2", (p.v_high - pn + resale) - p.v_high * s};
    out.high_age1 = {"type-H age 1",
                     p.v_high - pn + p.delta * std::max(p.v_high - pn + resale, p.v_high * s) -
                         (p.v_high * s - pu)};
    out.low_ir = {"type-L IR", p.alpha * p.v_low * s - pu};
    out.low_age1 = {"type-L age 1",
                    (p.alpha * p.v_low * s - pu) -
                        (p.v_low - pn + p.delta * std::max(p.v_low - pn + resale, p.v_low * s))};
    out.low_age2 = {"type-L age 2", (p.alpha * p.v_low * s - pu) - (p.v_low - pn)};
    out.low_entry_ratio = {"type-L entry ratio",
                          (1.0 - s) / (1.0 - ((1.0 - p.beta) * p.alpha - p.delta) * s) -
                              p.v_low / p.v_high};
    return out;
}

FeasibilityReport check_steady_state(const ModelParams& p, Regime regime, double d, State state,
                                     const ActionProfile& profile, const SolverOptions& opts,
                                     Objective which)
{
    FeasibilityReport r;
    r.state = state;
    r.profile = profile;
    r.d = d;
    r.prices = steady_state_prices(p, d);
    const double s = p.s(d);
    const double tol = opts.constraint_tolerance;

    // Age-1 purchases of new goods become next period's age-2 owners.
    r.next_state = 0.0;
    for (std::size_t i = 0; i < kCells.size(); ++i)
        if (kCells[i].age == Age::One && buys_new(profile.actions[i]))
            r.next_state += mass(p, kCells[i].type);
    r.state_consistent = std::abs(r.next_state - state_fraction(state, p)) <= 1e-12;

    // Used market with rationing at the marginal buyer's reservation price.
    double min_reservation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kCells.size(); ++i) {
        const Cell c = kCells[i];
        const Action a = profile.actions[i];
        if (a == Action::SellUsedBuyNew && owns_used_good(state, c.type, c.age))
            r.used_supply += mass(p, c.type);
        if (a == Action::BuyUsed) {
            r.used_demand += mass(p, c.type);
            min_reservation = std::min(min_reservation, p.alpha * valuation(p, c.type) * s);
        }
    }
    if (r.used_supply == 0.0 && r.used_demand == 0.0)
        r.market_clears = true;
    else if (r.used_supply == 0.0 || r.used_demand == 0.0)
        r.market_clears = false;
    else if (r.used_demand + 1e-12 < r.used_supply)
        r.market_clears = false;
    else
        r.market_clears = std::abs(r.prices.p_used - min_reservation) <= 1e-12;

    r.conditions = steady_conditions(p, d, r.prices);
    r.constraints_hold = true;
    for (const auto& c : r.conditions.constraints())
        r.constraints_hold = r.constraints_hold && c.holds(tol);
    r.entry_ratio_holds = r.conditions.low_entry_ratio.holds(tol);

    // Cell-by-cell best responses with the participation tie-break.
    r.best_responses = true;
    for (std::size_t i = 0; i < kCells.size(); ++i) {
        const Cell c = kCells[i];
        const SurplusContext ctx{valuation(p, c.type), s, p, r.prices};
        const bool owner = owns_used_good(state, c.type, c.age);
        auto surplus = [&](Action a) {
            if (c.age == Age::One)
                return ctx.age1(a);
            return owner ? ctx.owner_age2(a) : ctx.non_owner_age2(a);
        };

        CellCheck check;
        check.cell = c;
        check.prescribed = profile.actions[i];
        check.prescribed_surplus = surplus(check.prescribed);
        const auto options = menu(state, c.type, c.age);
        double best = -std::numeric_limits<double>::infinity();
        for (Action a : options)
            best = std::max(best, surplus(a));
        Action winner = options.front();
        int winner_priority = -1;
        for (Action a : options) {
            if (surplus(a) >= best - kTieTolerance && tie_priority(a) > winner_priority) {
                winner = a;
                winner_priority = tie_priority(a);
            }
        }
        check.best = winner;
        check.best_surplus = best;
        check.passes = winner == check.prescribed;
        r.cells[i] = check;
        r.best_responses = r.best_responses && check.passes;
    }

    // Dominance against the specific D=0 alternatives for each profile family.
    const double c = p.c(d);
    switch (state) {
    case State::Empty:
        r.dominated = true;
        r.dominance_reason = "x=0 steady state sustains no new-good sales";
        break;
    case State::Full: {
        const double flow = p.v_low * (1.0 + p.delta * s) - c;
        const double alt = 2.0 * p.v_low;
        r.dominated = flow < alt;
        if (r.dominated)
            r.dominance_reason = "x=1: price v_L(1+delta s) with demand 1 earns " + fmt(flow) +
                                 " < D=0 at v_L with demand 2 earning " + fmt(alt);
        break;
    }
    case State::HighOnly: {
        const Action high2 = profile.at(ConsumerType::High, Age::Two);
        if (high2 == Action::KeepUsed) {
            const double flow = p.n_high * (p.v_high * (1.0 + p.delta * s) - c);
            const double alt = 2.0 * p.n_high * p.v_high;
            r.dominated = flow < alt;
            if (r.dominated)
                r.dominance_reason = "keep used: price v_H(1+delta s) with demand n_H earns " +
                                     fmt(flow) + " < D=0 at v_H with demand 2n_H earning " +
                                     fmt(alt);
        } else if (high2 == Action::BuyNew) {
            r.dominated = c > 0.0;
            if (r.dominated)
                r.dominance_reason = "discard and buy new: D>0 costs c(D)=" + fmt(c) +
                                     " per unit with no resale value captured";
        } else {
            const double value = objective(p, regime, d, which);
            const double at_zero = objective(p, regime, 0.0, which);
            r.dominated = !(value > at_zero);
            if (r.dominated)
                r.dominance_reason = "screening value " + fmt(value) +
                                     " does not beat D=0 at v_H (" + fmt(at_zero) + ")";
        }
        break;
    }
    }
    return r;
}

SteadyStateSolution solve_unchecked(const ModelParams& p, Regime regime, const SolverOptions& opts,
                                    Objective which)
{
    SteadyStateSolution sol;
    sol.regime = regime;
    sol.objective = which;
    sol.shutdown_value = objective(p, regime, 0.0, which);
    sol.pooling_value = which == Objective::StreamOnly
                            ? p.delta / (1.0 - p.delta) * p.v_low
                            : p.v_low / (1.0 - p.delta);

    const double weight = foc_weight(p, regime, which);
    double d = 0.0;
    if (weight > 0.0) {
        d = durability_foc_root(p, weight, opts);
        sol.active = objective(p, regime, d, which) > sol.shutdown_value;
    }

    if (!sol.active) {
        sol.d_star = 0.0;
        sol.p_new = p.v_high;
        sol.p_used = 0.0;
        sol.per_period = per_period_breakdown(p, regime, 0.0);
        sol.per_period_profit = per_period_profit(p, regime, 0.0);
        sol.stream = discounted_stream(p, regime, 0.0);
        sol.first_period_profit = first_period_profit(p, 0.0);
        sol.objective_value = sol.shutdown_value;
        sol.pooling_dominates = sol.pooling_value > sol.objective_value;
        sol.note = "no interior durability beats D=0; type-L excluded";
        return sol;
    }

    const SteadyPrices pr = steady_state_prices(p, d);
    sol.state = State::HighOnly;
    sol.profile = screening_profile();
    sol.d_star = d;
    sol.p_new = pr.p_new;
    sol.p_used = pr.p_used;
    sol.per_period = per_period_breakdown(p, regime, d);
    sol.per_period_profit = per_period_profit(p, regime, d);
    sol.stream = discounted_stream(p, regime, d);
    sol.first_period_profit = first_period_profit(p, d);
    sol.objective_value = objective(p, regime, d, which);
    sol.pooling_dominates = sol.pooling_value > sol.objective_value;
    sol.used_market = UsedMarket{p.n_high, 2.0 * p.n_low, p.n_high / (2.0 * p.n_low)};

    sol.feasibility = check_steady_state(p, regime, d, State::HighOnly, screening_profile(), opts, which);
    sol.entry_ratio_holds = sol.feasibility->entry_ratio_holds;
    sol.steady_state_exists = sol.feasibility->passes();

    if (!sol.entry_ratio_holds) {
        // Ratio condition <=> s(D) <= (1 - r) / (1 - r [(1-beta) alpha - delta]), r = v_L / v_H.
        const double r = p.v_low / p.v_high;
        const double bound = (1.0 - r) / (1.0 - r * ((1.0 - p.beta) * p.alpha - p.delta));
        sol.best_feasible_d = std::min(d, quality_inverse(p.quality, bound, opts.d_max));
        sol.note = "no active OLG steady state at D*";
    } else if (!sol.steady_state_exists) {
        sol.note = "screening candidate fails a steady-state check at D*";
    }
    return sol;
}

SteadyStateSolution optimal_durability_olg(const ModelParams& params, Regime regime,
                                           const SolverOptions& opts, Objective which)
{
    auto report = validate_params(params, ModelKind::Olg, opts.d_max);
    if (!report.ok())
        throw ValidationError(std::move(report));
    return solve_unchecked(params, regime, opts, which);
}

}  // namespace recommerce::olg
