#include "recommerce/statics.hpp"

#include "parallel.hpp"
#include "recommerce/olg.hpp"
#include "recommerce/two_period.hpp"

#include <stdexcept>

namespace recommerce::statics {

std::string_view to_string(Parameter parameter)
{
    switch (parameter) {
    case Parameter::Alpha: return "alpha";
    case Parameter::Beta: return "beta";
    case Parameter::Delta: return "delta";
    }
    return "?";
}

Parameter parse_parameter(std::string_view text)
{
    if (text == "alpha")
        return Parameter::Alpha;
    if (text == "beta")
        return Parameter::Beta;
    if (text == "delta")
        return Parameter::Delta;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(text) +
                                "' (expected alpha, beta or delta)");
}

double get(const ModelParams& p, Parameter parameter)
{
    switch (parameter) {
    case Parameter::Alpha: return p.alpha;
    case Parameter::Beta: return p.beta;
    case Parameter::Delta: return p.delta;
    }
    return 0.0;
}

ModelParams with(ModelParams p, Parameter parameter, double value)
{
    switch (parameter) {
    case Parameter::Alpha: p.alpha = value; break;
    case Parameter::Beta: p.beta = value; break;
    case Parameter::Delta: p.delta = value; break;
    }
    return p;
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not_applicable";
    }
    return "?";
}

ValuePoint optimal_value(const ModelParams& p, ModelKind model, Regime regime,
                         const SolverOptions& opts)
{
    ValuePoint out;
    if (model == ModelKind::TwoPeriod) {
        // Same classification as two_period::solve without the social optimum.
        const double shutdown = (1.0 + p.delta) * p.n_high * p.v_high;
        out.value = shutdown;
        out.mode = "shutdown";
        if (two_period::activity_threshold(p, regime) == two_period::Activity::Active) {
            const double d = two_period::optimal_durability(p, regime, opts);
            const double value = two_period::profit(p, regime, d).total;
            if (value > shutdown) {
                const auto c = two_period::screening_conditions(p, d, two_period::prices(p, d));
                out.d_star = d;
                out.value = value;
                out.active = true;
                out.mode = c.low_ic.holds(opts.constraint_tolerance) ? "active" : "ic_violated";
            }
        }
    } else {
        const auto sol = olg::solve_unchecked(p, regime, opts);
        out.d_star = sol.d_star;
        out.value = sol.objective_value;
        out.active = sol.active;
        out.mode = !sol.active                ? "shutdown"
                   : sol.steady_state_exists ? "active"
                                             : "no_steady_state";
    }
    return out;
}

namespace {

/// Weight on future periods relative to the first: delta (two-period) or
/// delta/(1-delta) (OLG stream).
double future_weight(const ModelParams& p, ModelKind model)
{
    return model == ModelKind::TwoPeriod ? p.delta : p.delta / (1.0 - p.delta);
}

}  // namespace

double envelope_dpi_dalpha(const ModelParams& p, Regime regime, double d, ModelKind model)
{
    const double s = p.s(d);
    if (model == ModelKind::TwoPeriod) {
        const double factor = regime == Regime::Branded ? 2.0 - p.beta : 2.0 - 2.0 * p.beta;
        return p.n_high * p.delta * factor * p.v_low * s;
    }
    const double g = future_weight(p, model);
    const double later = regime == Regime::Branded ? g : g * (1.0 - p.beta);
    return p.n_high * s * p.v_low * (p.delta * (1.0 - p.beta) + later);
}

double envelope_dpi_dbeta(const ModelParams& p, Regime regime, double d, ModelKind model)
{
    const double s = p.s(d);
    if (model == ModelKind::TwoPeriod) {
        const double factor = regime == Regime::Branded ? 1.0 : 2.0;
        return -factor * p.n_high * p.delta * p.alpha * p.v_low * s;
    }
    const double g = regime == Regime::Branded ? 0.0 : future_weight(p, model);
    return -p.n_high * s * p.alpha * p.v_low * (p.delta + g);
}

double envelope_dpi_ddelta(const ModelParams& p, Regime regime, double d, ModelKind model)
{
    const double s = p.s(d);
    const double resale = p.alpha * (1.0 - p.beta) * p.v_low;
    const double used_share = regime == Regime::Branded ? p.alpha * p.v_low : resale;
    const double later = p.n_high * (used_share * s + p.v_high * (1.0 - s) - p.c(d));
    const double scale =
        model == ModelKind::TwoPeriod ? 1.0 : 1.0 / ((1.0 - p.delta) * (1.0 - p.delta));
    return p.n_high * resale * s + scale * later;
}

double envelope_derivative(const ModelParams& p, ModelKind model, Regime regime,
                           Parameter parameter, double d)
{
    switch (parameter) {
    case Parameter::Alpha: return envelope_dpi_dalpha(p, regime, d, model);
    case Parameter::Beta: return envelope_dpi_dbeta(p, regime, d, model);
    case Parameter::Delta: return envelope_dpi_ddelta(p, regime, d, model);
    }
    return 0.0;
}

double finite_difference(const ModelParams& p, ModelKind model, Regime regime, Parameter parameter,
                         double h, const SolverOptions& opts)
{
    const double x = get(p, parameter);
    const double up = optimal_value(with(p, parameter, x + h), model, regime, opts).value;
    const double down = optimal_value(with(p, parameter, x - h), model, regime, opts).value;
    return (up - down) / (2.0 * h);
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out;
    if (n == 0)
        return out;
    if (n == 1)
        return {lo};
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.back() = hi;
    return out;
}

namespace {

Verdict monotone_verdict(const std::vector<SweepPoint>& points, double SweepPoint::*field,
                         int direction)
{
    if (direction == 0)
        return Verdict::NotApplicable;
    const SweepPoint* prev = nullptr;
    std::size_t compared = 0;
    for (const auto& pt : points) {
        if (!pt.active) {
            prev = nullptr;  // inactive points break the run
            continue;
        }
        if (prev) {
            const double diff = pt.*field - prev->*field;
            if (!(direction * diff > 0.0))
                return Verdict::Violated;
            ++compared;
        }
        prev = &pt;
    }
    return compared == 0 ? Verdict::NotApplicable : Verdict::Holds;
}

}  // namespace

ComparativeReport monotonicity_sweep(const ModelParams& params, ModelKind model, Regime regime,
                                     Parameter parameter, const std::vector<double>& grid,
                                     const SolverOptions& opts, unsigned jobs, double fd_step)
{
    ComparativeReport report;
    report.parameter = parameter;
    report.model = model;
    report.regime = regime;
    report.points.resize(grid.size());

    detail::parallel_for(grid.size(), jobs, [&](std::size_t i) {
        const ModelParams p = with(params, parameter, grid[i]);
        const auto v = optimal_value(p, model, regime, opts);
        SweepPoint& pt = report.points[i];
        pt.value = grid[i];
        pt.d_star = v.d_star;
        pt.profit = v.value;
        pt.mode = v.mode;
        pt.active = v.active;
        if (model == ModelKind::TwoPeriod)
            pt.welfare = two_period::welfare(p, v.d_star);
        pt.envelope = envelope_derivative(p, model, regime, parameter, v.d_star);
        pt.fd = finite_difference(p, model, regime, parameter, fd_step, opts);

        const Regime other = regime == Regime::Branded ? Regime::ThirdParty : Regime::Branded;
        const auto w = optimal_value(p, model, other, opts);
        const auto& branded = regime == Regime::Branded ? v : w;
        const auto& third = regime == Regime::Branded ? w : v;
        pt.delta_d = branded.d_star - third.d_star;
        pt.delta_profit = branded.value - third.value;
    });

    for (const auto& pt : report.points)
        if (!pt.active)
            ++report.excluded;

    const int direction = parameter == Parameter::Alpha  ? 1
                          : parameter == Parameter::Beta ? -1
                                                         : 0;
    report.d_verdict = monotone_verdict(report.points, &SweepPoint::d_star, direction);
    report.profit_verdict = monotone_verdict(report.points, &SweepPoint::profit, direction);

    if (parameter == Parameter::Beta && regime == Regime::Branded && !report.points.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < report.points.size(); ++i)
            if (report.points[i].profit > report.points[best].profit)
                best = i;
        report.optimal_beta = report.points[best].value;
    }
    return report;
}

CommissionResult optimal_commission(const ModelParams& params, ModelKind model,
                                    std::size_t points, const SolverOptions& opts)
{
    if (points == 0)
        throw std::invalid_argument("optimal_commission: empty beta grid");
    CommissionResult out;
    out.betas.reserve(points);
    out.profits.reserve(points);
    out.active.reserve(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double beta = static_cast<double>(k) / static_cast<double>(points);
        const auto v = optimal_value(with(params, Parameter::Beta, beta), model, Regime::Branded, opts);
        out.betas.push_back(beta);
        out.profits.push_back(v.value);
        out.active.push_back(v.active);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < points; ++k)
        if (out.profits[k] > out.profits[best])
            best = k;
    out.beta_star = out.betas[best];
    for (std::size_t k = 1; k < points; ++k)
        if (out.active[k] && out.active[k - 1] && !(out.profits[k] < out.profits[k - 1]))
            out.strictly_decreasing = false;
    return out;
}

RegimeComparison regime_comparison(const ModelParams& p, ModelKind model, const SolverOptions& opts)
{
    RegimeComparison out;
    out.model = model;
    if (model == ModelKind::TwoPeriod)
        out.d_social = two_period::social_optimal_durability(p, opts);

    auto side = [&](Regime regime) {
        RegimeSide s;
        const auto v = optimal_value(p, model, regime, opts);
        s.active = v.mode == "active";
        s.d_star = v.d_star;
        s.profit = v.value;
        if (model == ModelKind::TwoPeriod) {
            s.welfare = two_period::welfare(p, v.d_star);
            s.sustainability_gap = *out.d_social - v.d_star;
        }
        return s;
    };
    out.third_party = side(Regime::ThirdParty);
    out.branded = side(Regime::Branded);

    if (out.third_party.active && out.branded.active) {
        out.delta_d = out.branded.d_star - out.third_party.d_star;
        out.delta_profit = out.branded.profit - out.third_party.profit;
        if (model == ModelKind::TwoPeriod)
            out.delta_welfare = *out.branded.welfare - *out.third_party.welfare;
    }
    return out;
}

}  // namespace recommerce::statics
