#pragma once

#include "recommerce/primitives.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace recommerce::two_period {

enum class Activity { Active, Shutdown };

/// ActivePreOwned: type-H buy new each period and resell, type-L buy used.
/// Shutdown: D=0, new goods priced at v_H, type-L excluded.
/// IcViolated: the activity threshold passes but the type-L IC (buy used rather
/// than new in period 2) fails at the unconstrained optimum.
enum class MarketMode { ActivePreOwned, Shutdown, IcViolated };

std::string_view to_string(MarketMode mode);

struct Prices {
    double new_period1 = 0.0;  ///< p1n
    double new_period2 = 0.0;  ///< p2n
    double used_period2 = 0.0; ///< p2u
};

struct ProfitBreakdown {
    double total = 0.0;       ///< period1 + delta * period2
    double period1 = 0.0;
    double period2 = 0.0;     ///< undiscounted, includes commission under Branded
    double commission = 0.0;  ///< n_H * beta * p2u when the firm runs the marketplace, else 0
};

/// Period-2 IC/IR conditions plus the period-1 type-H participation condition.
struct ScreeningConditions {
    Condition high_ic;           ///< sell used + buy new >= keep used
    Condition low_ic;            ///< buy used >= buy new
    Condition high_ir;           ///< v_H - p2n >= 0
    Condition low_ir;            ///< alpha v_L s - p2u >= 0
    Condition high_period1_ir;   ///< v_H + delta (1-beta) p2u - p1n >= 0

    std::array<Condition, 5> all() const
    {
        return {high_ic, low_ic, high_ir, low_ir, high_period1_ir};
    }
};

struct TwoPeriodEquilibrium {
    Regime regime = Regime::ThirdParty;
    MarketMode mode = MarketMode::Shutdown;
    double d_star = 0.0;
    double d_social = 0.0;
    double p1n = 0.0;
    double p2n = 0.0;
    std::optional<double> p2u;
    ProfitBreakdown profit;
    double welfare = 0.0;

    double activity_margin = 0.0;
    double active_profit = 0.0;    ///< screening profit at the FOC root (equals shutdown when inactive)
    double shutdown_profit = 0.0;  ///< (1 + delta) n_H v_H
    bool profit_tie = false;       ///< active and shutdown profits coincide

    ScreeningConditions conditions;
    std::optional<double> best_feasible_d;  ///< largest D meeting the type-L IC, when violated

    double sustainability_gap() const { return d_social - d_star; }
};

/// D** solving c'(D) = delta/(1+delta) v_L s'(D).
double social_optimal_durability(const ModelParams& params, const SolverOptions& opts = {});

/// M = 2 alpha (1-beta) v_L - v_H (third-party) or alpha (2-beta) v_L - v_H (branded).
double activity_margin(const ModelParams& params, Regime regime);

/// Active iff the margin is strictly positive; equality is Shutdown.
Activity activity_threshold(const ModelParams& params, Regime regime);

class InactiveRegimeError : public std::runtime_error {
public:
    InactiveRegimeError() : std::runtime_error("inactive regime, D*=0 by convention") {}
};

/// Root of c'(D) = delta/(1+delta) M s'(D). Throws InactiveRegimeError when M <= 0.
double optimal_durability(const ModelParams& params, Regime regime,
                          const SolverOptions& opts = {});

/// Screening prices with the type-L IR and type-H IC binding. Same in both regimes.
Prices prices(const ModelParams& params, double d);

ProfitBreakdown profit(const ModelParams& params, Regime regime, double d);

/// Total surplus of the active allocation.
double welfare(const ModelParams& params, double d);

ScreeningConditions screening_conditions(const ModelParams& params, double d,
                                         const Prices& p);

/// Validates, classifies and assembles the equilibrium. Throws ValidationError.
TwoPeriodEquilibrium solve(const ModelParams& params, Regime regime,
                           const SolverOptions& opts = {});

/// Same as solve() without the validation pass; for perturbed parameters in
/// finite-difference checks.
TwoPeriodEquilibrium solve_unchecked(const ModelParams& params, Regime regime,
                                     const SolverOptions& opts = {});

}  // namespace recommerce::two_period
