#pragma once

#include "recommerce/primitives.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recommerce::olg {

/// Fraction of age-2 customers who bought new last period: 0, n_H or 1.
enum class State { Empty, HighOnly, Full };

enum class ConsumerType { Low, High };
enum class Age { One, Two };
enum class Action { BuyNew, BuyUsed, DoNothing, SellUsedBuyNew, KeepUsed };

std::string_view to_string(State state);
std::string_view to_string(Action action);
double state_fraction(State state, const ModelParams& params);

struct Cell {
    ConsumerType type;
    Age age;
};

/// Cell order used everywhere: (L, 2), (H, 2), (L, 1), (H, 1).
inline constexpr std::array<Cell, 4> kCells = {{
    {ConsumerType::Low, Age::Two},
    {ConsumerType::High, Age::Two},
    {ConsumerType::Low, Age::One},
    {ConsumerType::High, Age::One},
}};

std::string cell_label(const Cell& cell);

struct ActionProfile {
    std::array<Action, 4> actions{};

    Action at(ConsumerType type, Age age) const;
    /// "L2=buy_used;H2=sell_used_buy_new;L1=buy_used;H1=buy_new"
    std::string label() const;
    bool operator==(const ActionProfile&) const = default;
};

/// Age-1 H buy new; age-2 H sell used and buy new; type-L of both ages buy used.
ActionProfile screening_profile();

/// Menu of a (type, age) cell in the given state; always three actions.
std::span<const Action> menu(State state, ConsumerType type, Age age);

/// Whether the cell holds a one-period-old unit entering the period.
bool owns_used_good(State state, ConsumerType type, Age age);

/// Cartesian product of the four menus (81 profiles per state).
std::vector<ActionProfile> enumerate_profiles(State state);

struct SteadyPrices {
    double p_new = 0.0;
    double p_used = 0.0;
};

SteadyPrices steady_state_prices(const ModelParams& params, double d);

/// Per-period payoff split into new-good margin and the commission the firm
/// keeps as marketplace operator.
struct PerPeriodProfit {
    double sales = 0.0;
    double commission = 0.0;
    double total() const { return sales + commission; }
};

PerPeriodProfit per_period_breakdown(const ModelParams& params, Regime regime, double d);
double per_period_profit(const ModelParams& params, Regime regime, double d);

/// G(D) = sum_{t>=1} delta^t * per_period_profit, in closed form.
double discounted_stream(const ModelParams& params, Regime regime, double d);

/// g1(D): period-1 new-good price paid by the first type-H cohort, which
/// anticipates reselling at the steady used price.
double first_period_price(const ModelParams& params, double d);
double first_period_profit(const ModelParams& params, double d);

enum class Objective { FirstPeriodPlusStream, StreamOnly };
std::string_view to_string(Objective objective);

double objective(const ModelParams& params, Regime regime, double d,
                 Objective which = Objective::FirstPeriodPlusStream);

/// w such that the objective's FOC reads c'(D) = w s'(D).
double foc_weight(const ModelParams& params, Regime regime,
                  Objective which = Objective::FirstPeriodPlusStream);

/// Price-level conditions supporting the screening profile, continuation terms
/// included, plus the type-L entry ratio.
struct SteadyConditions {
    Condition high_age2;
    Condition high_age1;
    Condition low_ir;
    Condition low_age1;
    Condition low_age2;
    Condition low_entry_ratio;  ///< (1-s)/(1-[(1-beta)alpha - delta]s) - v_L/v_H

    std::array<Condition, 5> constraints() const
    {
        return {high_age2, high_age1, low_ir, low_age1, low_age2};
    }
};

SteadyConditions steady_conditions(const ModelParams& params, double d, const SteadyPrices& prices);

struct CellCheck {
    Cell cell{};
    Action prescribed = Action::DoNothing;
    Action best = Action::DoNothing;
    double prescribed_surplus = 0.0;
    double best_surplus = 0.0;
    bool passes = false;
};

struct FeasibilityReport {
    State state = State::HighOnly;
    ActionProfile profile;
    double d = 0.0;
    SteadyPrices prices;

    double next_state = 0.0;
    bool state_consistent = false;

    double used_supply = 0.0;
    double used_demand = 0.0;
    bool market_clears = false;

    SteadyConditions conditions;
    bool constraints_hold = false;  ///< the five price-level conditions
    bool entry_ratio_holds = false;

    std::array<CellCheck, 4> cells{};
    bool best_responses = false;

    bool dominated = false;
    std::string dominance_reason;

    bool passes() const
    {
        return state_consistent && market_clears && constraints_hold && entry_ratio_holds &&
               best_responses && !dominated;
    }
};

/// Evaluates one (state, profile) candidate at the steady-state candidate prices.
/// Never throws for D >= 0; every failure is reported.
FeasibilityReport check_steady_state(const ModelParams& params, Regime regime, double d,
                                     State state, const ActionProfile& profile,
                                     const SolverOptions& opts = {},
                                     Objective which = Objective::FirstPeriodPlusStream);

struct UsedMarket {
    double supply = 0.0;
    double demand = 0.0;
    double rationed_fraction = 0.0;  ///< share of used-good demand that is served
};

struct SteadyStateSolution {
    Regime regime = Regime::ThirdParty;
    Objective objective = Objective::FirstPeriodPlusStream;

    bool active = false;               ///< interior FOC root that beats D=0
    bool steady_state_exists = false;  ///< active and the screening candidate passes every check
    std::optional<State> state;
    std::optional<ActionProfile> profile;

    double d_star = 0.0;  ///< unconstrained maximizer
    std::optional<double> best_feasible_d;
    double p_new = 0.0;
    double p_used = 0.0;

    PerPeriodProfit per_period;
    double per_period_profit = 0.0;
    double stream = 0.0;  ///< G(D*)
    double first_period_profit = 0.0;
    double objective_value = 0.0;

    double shutdown_value = 0.0;  ///< D=0 priced at v_H, same objective basis
    double pooling_value = 0.0;   ///< D=0 priced at v_L to everyone, same basis
    bool pooling_dominates = false;

    bool entry_ratio_holds = false;
    std::optional<FeasibilityReport> feasibility;
    UsedMarket used_market;
    std::string note;
};

/// Validates (OLG rules) and solves. Throws ValidationError.
SteadyStateSolution optimal_durability_olg(const ModelParams& params, Regime regime,
                                           const SolverOptions& opts = {},
                                           Objective which = Objective::FirstPeriodPlusStream);

SteadyStateSolution solve_unchecked(const ModelParams& params, Regime regime,
                                    const SolverOptions& opts = {},
                                    Objective which = Objective::FirstPeriodPlusStream);

}  // namespace recommerce::olg
