#pragma once

#include "recommerce/olg.hpp"
#include "recommerce/primitives.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

/// Brute-force ground truth. Objectives are written out again from their
/// displayed formulas; nothing here calls the analytic solvers.
namespace recommerce::oracle {

struct GridSpec {
    double d_max = 10.0;
    std::size_t points = 100000;

    /// Throws std::invalid_argument unless points >= 1000 and d_max > 0.
    void validate() const;
    double step() const { return d_max / static_cast<double>(points - 1); }
    double at(std::size_t i) const;
};

/// c(D) and s(D) tabulated on a grid; reusable across draws that share the
/// cost and quality families.
struct GridTable {
    GridSpec grid;
    std::vector<double> d;
    std::vector<double> c;
    std::vector<double> s;

    static GridTable build(const FunctionSpec& cost, const FunctionSpec& quality,
                           const GridSpec& grid);
};

struct GridArgmax {
    double d_hat = 0.0;
    double value = 0.0;
    std::size_t index = 0;
    double step = 0.0;
};

/// Two-period: third-party or branded two-period profit.
/// OLG: n_H (g1(D) - c(D)) + delta/(1-delta) * per-period payoff.
double profit_objective(const ModelParams& params, Regime regime, ModelKind model, double c,
                        double s);

/// Exhaustive maximization; D=0 is the first grid point; lowest index wins ties.
GridArgmax grid_argmax_profit(const ModelParams& params, Regime regime, ModelKind model,
                              const GridTable& table);
GridArgmax grid_argmax_profit(const ModelParams& params, Regime regime, ModelKind model,
                              const GridSpec& grid);

/// Two-period total surplus.
GridArgmax grid_argmax_welfare(const ModelParams& params, const GridTable& table);
GridArgmax grid_argmax_welfare(const ModelParams& params, const GridSpec& grid);

/// Number of sign changes in consecutive objective differences (zeros skipped).
std::size_t slope_sign_changes(const ModelParams& params, Regime regime, ModelKind model,
                               const GridTable& table);

struct CellAudit {
    std::string cell;
    std::string prescribed;
    std::string best_alternative;
    double prescribed_surplus = 0.0;
    double best_alternative_surplus = 0.0;
    double margin = 0.0;  ///< prescribed minus best alternative; >= -tol passes
    bool passes = false;
};

struct AuditReport {
    std::array<CellAudit, 4> cells{};
    bool passes() const;
};

/// Lifetime surplus of each action in each cell's menu, age-2 continuation
/// fixed by the stationary profile and prices.
AuditReport best_response_audit(const ModelParams& params, double d, const olg::SteadyPrices& prices,
                                olg::State state, const olg::ActionProfile& profile,
                                double tolerance = 1e-12);

/// sum_{t=1..T} delta^t * per-period payoff.
double truncated_stream(const ModelParams& params, Regime regime, double d, int horizon);

}  // namespace recommerce::oracle
