#include "recommerce/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace recommerce::oracle {

void GridSpec::validate() const
{
    if (points < 1000)
        throw std::invalid_argument("grid needs at least 1000 points");
    if (!(d_max > 0.0))
        throw std::invalid_argument("grid upper bound must be positive");
}

double GridSpec::at(std::size_t i) const
{
    if (i + 1 == points)
        return d_max;
    return d_max * static_cast<double>(i) / static_cast<double>(points - 1);
}

GridTable GridTable::build(const FunctionSpec& cost, const FunctionSpec& quality,
                           const GridSpec& grid)
{
    grid.validate();
    GridTable t;
    t.grid = grid;
    t.d.resize(grid.points);
    t.c.resize(grid.points);
    t.s.resize(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        t.d[i] = grid.at(i);
        t.c[i] = eval(cost, t.d[i]).value;
        t.s[i] = eval(quality, t.d[i]).value;
    }
    return t;
}

double profit_objective(const ModelParams& p, Regime regime, ModelKind model, double c, double s)
{
    const double nh = p.n_high, vh = p.v_high, vl = p.v_low;
    const double a = p.alpha, b = p.beta, dl = p.delta;
    if (model == ModelKind::TwoPeriod) {
        // Period 1 at v_H plus the discounted resale value, period 2 at the
        // screening price; branded adds the commission on n_H used sales.
        double pi = nh * (vh + dl * a * (1 - b) * vl * s - c) +
                    dl * nh * (a * (1 - b) * vl * s + vh * (1 - s) - c);
        if (regime == Regime::Branded)
            pi += dl * nh * b * a * vl * s;
        return pi;
    }
    const double per_period = regime == Regime::Branded
                                  ? nh * (a * vl * s + vh * (1 - s) - c)
                                  : nh * (a * (1 - b) * vl * s + vh * (1 - s) - c);
    const double first = nh * (vh + dl * a * (1 - b) * vl * s - c);
    return first + dl / (1 - dl) * per_period;
}

namespace {

template <class F>
GridArgmax argmax_over(const GridTable& t, F&& f)
{
    GridArgmax best;
    best.step = t.grid.step();
    best.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.d.size(); ++i) {
        const double v = f(t.c[i], t.s[i]);
        if (v > best.value) {
            best.value = v;
            best.index = i;
        }
    }
    best.d_hat = t.d[best.index];
    return best;
}

}  // namespace

GridArgmax grid_argmax_profit(const ModelParams& p, Regime regime, ModelKind model,
                              const GridTable& table)
{
    return argmax_over(table, [&](double c, double s) {
        return profit_objective(p, regime, model, c, s);
    });
}

GridArgmax grid_argmax_profit(const ModelParams& p, Regime regime, ModelKind model,
                              const GridSpec& grid)
{
    return grid_argmax_profit(p, regime, model, GridTable::build(p.cost, p.quality, grid));
}

GridArgmax grid_argmax_welfare(const ModelParams& p, const GridTable& table)
{
    return argmax_over(table, [&](double c, double s) {
        return (1 + p.delta) * p.n_high * p.v_high + p.delta * p.n_high * p.v_low * s -
               (1 + p.delta) * p.n_high * c;
    });
}

GridArgmax grid_argmax_welfare(const ModelParams& p, const GridSpec& grid)
{
    return grid_argmax_welfare(p, GridTable::build(p.cost, p.quality, grid));
}

std::size_t slope_sign_changes(const ModelParams& p, Regime regime, ModelKind model,
                               const GridTable& t)
{
    std::size_t changes = 0;
    int last_sign = 0;
    double prev = profit_objective(p, regime, model, t.c[0], t.s[0]);
    for (std::size_t i = 1; i < t.d.size(); ++i) {
        const double cur = profit_objective(p, regime, model, t.c[i], t.s[i]);
        const double diff = cur - prev;
        prev = cur;
        const int sign = (diff > 0) - (diff < 0);
        if (sign == 0)
            continue;
        if (last_sign != 0 && sign != last_sign)
            ++changes;
        last_sign = sign;
    }
    return changes;
}

bool AuditReport::passes() const
{
    return std::all_of(cells.begin(), cells.end(), [](const CellAudit& c) { return c.passes; });
}

namespace {

using olg::Action;
using olg::Age;
using olg::ConsumerType;

struct Flow {
    double surplus;
    bool owns_next;  // holds a one-period-old unit next period
};

/// One-period surplus of an action. Labels that do not apply to the holder
/// collapse to their nearest meaning: a non-owner cannot sell or keep.
Flow period_flow(Action a, bool owner, double v, double s, double alpha, double beta,
                 const olg::SteadyPrices& pr)
{
    switch (a) {
    case Action::SellUsedBuyNew:
        return {v - pr.p_new + (owner ? (1 - beta) * pr.p_used : 0.0), true};
    case Action::BuyNew: return {v - pr.p_new, true};
    case Action::KeepUsed: return {owner ? v * s : 0.0, false};
    case Action::BuyUsed: return {alpha * v * s - pr.p_used, false};
    case Action::DoNothing: return {0.0, false};
    }
    return {0.0, false};
}

double best_final_period(bool owner, double v, double s, double alpha, double beta,
                         const olg::SteadyPrices& pr)
{
    // An age-2 consumer faces the owner menu iff they carry a unit over.
    static constexpr std::array<Action, 3> owner_menu = {Action::SellUsedBuyNew, Action::BuyNew,
                                                         Action::KeepUsed};
    static constexpr std::array<Action, 3> other_menu = {Action::BuyNew, Action::BuyUsed,
                                                         Action::DoNothing};
    double best = -std::numeric_limits<double>::infinity();
    for (Action a : owner ? owner_menu : other_menu)
        best = std::max(best, period_flow(a, owner, v, s, alpha, beta, pr).surplus);
    return best;
}

}  // namespace

AuditReport best_response_audit(const ModelParams& p, double d, const olg::SteadyPrices& pr,
                                olg::State state, const olg::ActionProfile& profile,
                                double tolerance)
{
    const double s = p.s(d);
    AuditReport report;
    for (std::size_t i = 0; i < olg::kCells.size(); ++i) {
        const auto cell = olg::kCells[i];
        const double v = cell.type == ConsumerType::High ? p.v_high : p.v_low;
        const bool owner = olg::owns_used_good(state, cell.type, cell.age);

        auto lifetime = [&](Action a) {
            const Flow now = period_flow(a, owner, v, s, p.alpha, p.beta, pr);
            if (cell.age == Age::Two)
                return now.surplus;
            return now.surplus + p.delta * best_final_period(now.owns_next, v, s, p.alpha, p.beta, pr);
        };

        CellAudit audit;
        audit.cell = olg::cell_label(cell);
        const Action prescribed = profile.actions[i];
        audit.prescribed = std::string(olg::to_string(prescribed));
        audit.prescribed_surplus = lifetime(prescribed);
        audit.best_alternative_surplus = -std::numeric_limits<double>::infinity();
        for (Action a : olg::menu(state, cell.type, cell.age)) {
            if (a == prescribed)
                continue;
            const double value = lifetime(a);
            if (value > audit.best_alternative_surplus) {
                audit.best_alternative_surplus = value;
                audit.best_alternative = std::string(olg::to_string(a));
            }
        }
        audit.margin = audit.prescribed_surplus - audit.best_alternative_surplus;
        audit.passes = audit.margin >= -tolerance;
        report.cells[i] = audit;
    }
    return report;
}

double truncated_stream(const ModelParams& p, Regime regime, double d, int horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("truncated_stream: horizon must be at least 1");
    const double s = p.s(d);
    const double c = p.c(d);
    const double used = regime == Regime::Branded ? p.alpha * p.v_low : p.alpha * (1 - p.beta) * p.v_low;
    const double flow = p.n_high * (used * s + p.v_high * (1 - s) - c);
    double total = 0.0;
    double discount = 1.0;
    for (int t = 1; t <= horizon; ++t) {
        discount *= p.delta;
        total += discount * flow;
    }
    return total;
}

}  // namespace recommerce::oracle
