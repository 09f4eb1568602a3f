#include "recommerce/verification.hpp"

#include "parallel.hpp"
#include "recommerce/olg.hpp"
#include "recommerce/oracle.hpp"
#include "recommerce/statics.hpp"
#include "recommerce/two_period.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace recommerce::verification {

namespace {

constexpr std::size_t kMaxCounterexamples = 5;

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Draw {
    ModelKind model;
    ModelParams params;
    std::vector<double> extra;  // auxiliary durability points, drawn with the parameters
};

struct Outcome {
    long checks = 0;
    long violations = 0;
    std::vector<Counterexample> counterexamples;

    void check(bool ok, const Draw& draw, std::string_view regime, const std::string& detail)
    {
        ++checks;
        if (ok)
            return;
        ++violations;
        if (counterexamples.size() < kMaxCounterexamples)
            counterexamples.push_back(
                {std::string(to_string(draw.model)), std::string(regime), draw.params, detail});
    }
};

std::mt19937_64 stream(std::uint64_t seed, Property property, ModelKind model)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(property), static_cast<std::uint32_t>(model)};
    return std::mt19937_64(seq);
}

using Accept = bool (*)(const ModelParams&, ModelKind, const VerifyConfig&);

/// Rejection-samples `count` draws sequentially, so the accepted set depends
/// only on the seed.
std::vector<Draw> generate(Property property, ModelKind model, int count, const VerifyConfig& cfg,
                           Accept accept, int& rejected, int extra = 0)
{
    std::vector<Draw> out;
    auto rng = stream(cfg.seed, property, model);
    const long max_attempts = static_cast<long>(count) * cfg.max_attempts_per_draw;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < max_attempts) {
        ++attempts;
        Draw d{model, sample_params(rng, model, cfg.box), {}};
        for (int i = 0; i < extra; ++i)
            d.extra.push_back(uniform(rng, 0.0, 3.0));
        if (accept(d.params, model, cfg))
            out.push_back(std::move(d));
        else
            ++rejected;
    }
    return out;
}

template <class Eval>
void evaluate(PropertyResult& result, const std::vector<Draw>& draws, const VerifyConfig& cfg,
              Eval&& eval)
{
    std::vector<Outcome> outcomes(draws.size());
    detail::parallel_for(draws.size(), cfg.jobs,
                         [&](std::size_t i) { eval(draws[i], outcomes[i]); });
    result.draws += static_cast<int>(draws.size());
    for (auto& o : outcomes) {
        result.checks += o.checks;
        result.violations += o.violations;
        for (auto& c : o.counterexamples)
            if (result.counterexamples.size() < kMaxCounterexamples)
                result.counterexamples.push_back(std::move(c));
    }
}

bool accept_both_active(const ModelParams& p, ModelKind model, const VerifyConfig& cfg)
{
    return both_active(p, model, cfg.solver);
}

bool accept_admissible(const ModelParams&, ModelKind, const VerifyConfig&)
{
    return true;
}

std::vector<double> ladder(double center, double step, double lo, double hi)
{
    double start = center - 2.0 * step;
    start = std::clamp(start, lo, hi - 4.0 * step);
    std::vector<double> out;
    for (int i = 0; i < 5; ++i)
        out.push_back(start + i * step);
    return out;
}

std::vector<double> alpha_ladder(const ModelParams& p, const VerifyConfig& cfg)
{
    return ladder(p.alpha, cfg.ladder_step, cfg.box.alpha_min, cfg.box.alpha_max);
}

std::vector<double> beta_ladder(const ModelParams& p, const VerifyConfig& cfg)
{
    return ladder(p.beta, cfg.ladder_step, cfg.box.beta_min, cfg.box.beta_max);
}

bool accept_ladders(const ModelParams& p, ModelKind model, const VerifyConfig& cfg)
{
    for (double a : alpha_ladder(p, cfg))
        if (!both_active(statics::with(p, statics::Parameter::Alpha, a), model, cfg.solver))
            return false;
    for (double b : beta_ladder(p, cfg))
        if (!both_active(statics::with(p, statics::Parameter::Beta, b), model, cfg.solver))
            return false;
    return true;
}

constexpr std::array<Regime, 2> kRegimes = {Regime::ThirdParty, Regime::Branded};
constexpr std::array<ModelKind, 2> kModels = {ModelKind::TwoPeriod, ModelKind::Olg};

bool rel_close(double analytic, double numeric, double tol)
{
    if (std::abs(analytic) <= 1e-8)
        return true;
    return std::abs(analytic - numeric) / std::abs(analytic) <= tol;
}

// Canonical regression values, confirmed against the grid oracle.
constexpr double kCanonicalThirdParty = 0.0673;
constexpr double kCanonicalBranded = 0.1238;
constexpr double kCanonicalSocial = 0.285;
constexpr double kCanonicalTolerance = 1e-3;

}  // namespace

ModelParams sample_params(std::mt19937_64& rng, ModelKind model, const DrawBox& box)
{
    ModelParams p;
    for (;;) {
        p.v_high = box.v_high;
        p.v_low = uniform(rng, box.v_low_min, box.v_low_max);
        p.alpha = uniform(rng, box.alpha_min, box.alpha_max);
        p.beta = uniform(rng, box.beta_min, box.beta_max);
        p.delta = uniform(rng, box.delta_min, box.delta_max);
        p.n_high = uniform(rng, box.n_high_min, box.n_high_max);
        p.n_low = 1.0 - p.n_high;
        if (model == ModelKind::Olg || p.n_low > p.n_high)
            return p;
    }
}

bool both_active(const ModelParams& p, ModelKind model, const SolverOptions& opts)
{
    for (Regime r : kRegimes) {
        if (model == ModelKind::TwoPeriod) {
            if (two_period::solve_unchecked(p, r, opts).mode != two_period::MarketMode::ActivePreOwned)
                return false;
        } else if (!olg::solve_unchecked(p, r, opts).steady_state_exists) {
            return false;
        }
    }
    return true;
}

std::string_view name(Property property)
{
    switch (property) {
    case Property::FocOracle: return "foc_oracle_agreement";
    case Property::CanonicalRegression: return "canonical_regression";
    case Property::Monotonicity: return "alpha_beta_monotonicity";
    case Property::RegimeOrdering: return "branded_durability_higher";
    case Property::CommissionZero: return "zero_commission_optimal";
    case Property::AlphaIncentive: return "alpha_incentive_and_envelope";
    case Property::SteadyStateUniqueness: return "olg_steady_state_uniqueness";
    case Property::ConstraintStructure: return "constraint_structure";
    case Property::WelfareOrdering: return "welfare_ordering";
    case Property::HarnessSelfTest: return "harness_self_test";
    }
    return "?";
}

std::string_view description(Property property)
{
    switch (property) {
    case Property::FocOracle: return "FOC root within one grid step of the grid argmax";
    case Property::CanonicalRegression: return "canonical D*_T, D*_B, D** match frozen and oracle values";
    case Property::Monotonicity: return "D* and profit increase along alpha ladders, decrease along beta ladders";
    case Property::RegimeOrdering: return "D*_B > D*_T and profit_B >= profit_T";
    case Property::CommissionZero: return "branded profit over the beta grid peaks at beta=0 and decreases";
    case Property::AlphaIncentive: return "dpi_B/dalpha(beta=0) >= dpi_T/dalpha(beta); envelope matches FD";
    case Property::SteadyStateUniqueness: return "exactly one of 243 (state, profile) candidates passes";
    case Property::ConstraintStructure: return "binding and slack constraints; implication chain";
    case Property::WelfareOrdering: return "D*_T < D*_B < D** and welfare in the same order";
    case Property::HarnessSelfTest: return "inverted assertion D*_B < D*_T (must fail)";
    }
    return "?";
}

std::vector<Property> default_suite()
{
    return {Property::FocOracle,       Property::CanonicalRegression,
            Property::Monotonicity,    Property::RegimeOrdering,
            Property::CommissionZero,  Property::AlphaIncentive,
            Property::SteadyStateUniqueness, Property::ConstraintStructure,
            Property::WelfareOrdering};
}

bool VerificationReport::all_passed() const
{
    return !results.empty() &&
           std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
}

PropertyResult run_property(Property property, const VerifyConfig& cfg)
{
    PropertyResult result;
    result.property = property;
    const auto& opts = cfg.solver;

    switch (property) {
    case Property::FocOracle: {
        oracle::GridSpec grid{cfg.oracle_d_max, cfg.oracle_grid_points};
        const ModelParams families = canonical_params();
        const auto table = std::make_shared<const oracle::GridTable>(
            oracle::GridTable::build(families.cost, families.quality, grid));
        for (ModelKind model : kModels) {
            auto draws = generate(property, model, cfg.oracle_draws, cfg, accept_both_active,
                                  result.rejected);
            evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
                for (Regime r : kRegimes) {
                    const double solver = statics::optimal_value(d.params, model, r, opts).d_star;
                    const auto hat = oracle::grid_argmax_profit(d.params, r, model, *table);
                    o.check(std::abs(solver - hat.d_hat) <= hat.step, d, to_string(r),
                            "solver D*=" + fmt(solver) + " grid D=" + fmt(hat.d_hat) +
                                " step=" + fmt(hat.step));
                }
            });
        }
        break;
    }
    case Property::CanonicalRegression: {
        const ModelParams p = canonical_params();
        const Draw d{ModelKind::TwoPeriod, p, {}};
        const oracle::GridSpec grid{cfg.oracle_d_max, cfg.oracle_grid_points};
        const auto table = oracle::GridTable::build(p.cost, p.quality, grid);
        Outcome o;
        const double dt = two_period::optimal_durability(p, Regime::ThirdParty, opts);
        const double db = two_period::optimal_durability(p, Regime::Branded, opts);
        const double ds = two_period::social_optimal_durability(p, opts);
        const auto gt = oracle::grid_argmax_profit(p, Regime::ThirdParty, ModelKind::TwoPeriod, table);
        const auto gb = oracle::grid_argmax_profit(p, Regime::Branded, ModelKind::TwoPeriod, table);
        const auto gs = oracle::grid_argmax_welfare(p, table);
        const std::array<std::tuple<const char*, double, double, double>, 3> rows = {{
            {"third-party", dt, gt.d_hat, kCanonicalThirdParty},
            {"branded", db, gb.d_hat, kCanonicalBranded},
            {"social", ds, gs.d_hat, kCanonicalSocial},
        }};
        for (const auto& [label, solved, grid_d, frozen] : rows) {
            o.check(std::abs(solved - frozen) <= kCanonicalTolerance, d, label,
                    "D*=" + fmt(solved) + " frozen " + fmt(frozen));
            o.check(std::abs(grid_d - frozen) <= kCanonicalTolerance, d, label,
                    "oracle D=" + fmt(grid_d) + " frozen " + fmt(frozen));
            o.check(std::abs(solved - grid_d) <= table.grid.step(), d, label,
                    "D*=" + fmt(solved) + " oracle D=" + fmt(grid_d));
        }
        result.draws = 1;
        result.checks = o.checks;
        result.violations = o.violations;
        result.counterexamples = std::move(o.counterexamples);
        break;
    }
    case Property::Monotonicity: {
        for (ModelKind model : kModels) {
            auto draws = generate(property, model, cfg.draws, cfg, accept_ladders, result.rejected);
            evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
                for (Regime r : kRegimes) {
                    for (auto parameter : {statics::Parameter::Alpha, statics::Parameter::Beta}) {
                        const int dir = parameter == statics::Parameter::Alpha ? 1 : -1;
                        const auto grid = parameter == statics::Parameter::Alpha
                                              ? alpha_ladder(d.params, cfg)
                                              : beta_ladder(d.params, cfg);
                        statics::ValuePoint prev;
                        for (std::size_t i = 0; i < grid.size(); ++i) {
                            const auto v = statics::optimal_value(
                                statics::with(d.params, parameter, grid[i]), model, r, opts);
                            if (i > 0) {
                                const std::string at = std::string(statics::to_string(parameter)) +
                                                       " " + fmt(grid[i - 1]) + "->" + fmt(grid[i]);
                                o.check(dir * (v.d_star - prev.d_star) > 0.0, d, to_string(r),
                                        "D* not monotone at " + at);
                                o.check(dir * (v.value - prev.value) > 0.0, d, to_string(r),
                                        "profit not monotone at " + at);
                            }
                            prev = v;
                        }
                    }
                }
            });
        }
        break;
    }
    case Property::RegimeOrdering: {
        for (ModelKind model : kModels) {
            auto draws = generate(property, model, cfg.draws, cfg, accept_both_active, result.rejected);
            evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
                const auto t = statics::optimal_value(d.params, model, Regime::ThirdParty, opts);
                const auto b = statics::optimal_value(d.params, model, Regime::Branded, opts);
                o.check(b.d_star > t.d_star, d, "both",
                        "D*_B=" + fmt(b.d_star) + " D*_T=" + fmt(t.d_star));
                o.check(b.value >= t.value, d, "both",
                        "profit_B=" + fmt(b.value) + " profit_T=" + fmt(t.value));
            });
        }
        break;
    }
    case Property::CommissionZero: {
        for (ModelKind model : kModels) {
            auto draws = generate(property, model, cfg.draws, cfg, accept_both_active, result.rejected);
            evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
                const auto res = statics::optimal_commission(d.params, model, cfg.commission_points, opts);
                o.check(res.beta_star == 0.0, d, "branded", "argmax beta=" + fmt(res.beta_star));
                o.check(res.strictly_decreasing, d, "branded",
                        "profit curve not strictly decreasing across the active region");
            });
        }
        break;
    }
    case Property::AlphaIncentive: {
        for (ModelKind model : kModels) {
            auto draws = generate(property, model, cfg.draws, cfg, accept_both_active, result.rejected);
            evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
                const ModelParams zero = statics::with(d.params, statics::Parameter::Beta, 0.0);
                const auto b0 = statics::optimal_value(zero, model, Regime::Branded, opts);
                const double branded =
                    statics::envelope_dpi_dalpha(zero, Regime::Branded, b0.d_star, model);
                for (double beta : {d.params.beta, 0.1, 0.2, 0.3, 0.4, 0.5}) {
                    const ModelParams q = statics::with(d.params, statics::Parameter::Beta, beta);
                    const auto t = statics::optimal_value(q, model, Regime::ThirdParty, opts);
                    if (!t.active)
                        continue;
                    const double third =
                        statics::envelope_dpi_dalpha(q, Regime::ThirdParty, t.d_star, model);
                    const bool ok = beta > 0.0 ? branded > third : branded >= third;
                    o.check(ok, d, "both",
                            "dpi_B/dalpha(0)=" + fmt(branded) + " dpi_T/dalpha(" + fmt(beta) +
                                ")=" + fmt(third));
                }
                for (Regime r : kRegimes) {
                    const auto v = statics::optimal_value(d.params, model, r, opts);
                    for (auto parameter : {statics::Parameter::Alpha, statics::Parameter::Beta}) {
                        const double analytic =
                            statics::envelope_derivative(d.params, model, r, parameter, v.d_star);
                        const double numeric =
                            statics::finite_difference(d.params, model, r, parameter, cfg.fd_step, opts);
                        o.check(rel_close(analytic, numeric, cfg.fd_tolerance), d, to_string(r),
                                std::string(statics::to_string(parameter)) + " envelope " +
                                    fmt(analytic) + " vs fd " + fmt(numeric));
                    }
                }
            });
        }
        break;
    }
    case Property::SteadyStateUniqueness: {
        auto draws = generate(property, ModelKind::Olg, cfg.audit_draws, cfg, accept_both_active,
                              result.rejected);
        evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
            const auto& p = d.params;
            for (Regime r : kRegimes) {
                const double dstar = statics::optimal_value(p, ModelKind::Olg, r, opts).d_star;
                int passing = 0;
                bool screening_passes = false;
                for (auto state : {olg::State::Empty, olg::State::HighOnly, olg::State::Full}) {
                    for (const auto& profile : olg::enumerate_profiles(state)) {
                        if (!olg::check_steady_state(p, r, dstar, state, profile, opts).passes())
                            continue;
                        ++passing;
                        if (state == olg::State::HighOnly && profile == olg::screening_profile())
                            screening_passes = true;
                    }
                }
                o.check(passing == 1 && screening_passes, d, to_string(r),
                        std::to_string(passing) + " candidates pass; screening profile " +
                            (screening_passes ? "passes" : "fails"));

                const auto steady = olg::steady_state_prices(p, dstar);
                const auto two = two_period::prices(p, dstar);
                o.check(std::abs(steady.p_new - two.new_period2) <= cfg.price_tolerance &&
                            std::abs(steady.p_used - two.used_period2) <= cfg.price_tolerance,
                        d, to_string(r), "steady prices differ from period-2 prices");

                const auto audit = oracle::best_response_audit(
                    p, dstar, steady, olg::State::HighOnly, olg::screening_profile());
                o.check(audit.passes(), d, to_string(r), "oracle best-response audit fails");
            }
        });
        break;
    }
    case Property::ConstraintStructure: {
        const double tol = cfg.bind_tolerance;
        auto two = generate(property, ModelKind::TwoPeriod, cfg.audit_draws, cfg, accept_both_active,
                            result.rejected);
        evaluate(result, two, cfg, [&](const Draw& d, Outcome& o) {
            for (Regime r : kRegimes) {
                const auto eq = two_period::solve_unchecked(d.params, r, opts);
                const auto& c = eq.conditions;
                o.check(c.high_ic.binds(tol), d, to_string(r), "type-H IC slack " + fmt(c.high_ic.slack));
                o.check(c.low_ir.binds(tol), d, to_string(r), "type-L IR slack " + fmt(c.low_ir.slack));
                for (const auto& k : {c.low_ic, c.high_ir, c.high_period1_ir})
                    o.check(k.holds(tol), d, to_string(r),
                            std::string(k.name) + " slack " + fmt(k.slack));
            }
        });
        auto olg_draws = generate(property, ModelKind::Olg, cfg.audit_draws, cfg,
                                  accept_both_active, result.rejected);
        evaluate(result, olg_draws, cfg, [&](const Draw& d, Outcome& o) {
            for (Regime r : kRegimes) {
                const double dstar = statics::optimal_value(d.params, ModelKind::Olg, r, opts).d_star;
                const auto c = olg::steady_conditions(d.params, dstar,
                                                      olg::steady_state_prices(d.params, dstar));
                o.check(c.high_age2.binds(tol), d, to_string(r),
                        "type-H age-2 slack " + fmt(c.high_age2.slack));
                o.check(c.low_ir.binds(tol), d, to_string(r), "type-L IR slack " + fmt(c.low_ir.slack));
                for (const auto& k : {c.high_age1, c.low_age1, c.low_age2, c.low_entry_ratio})
                    o.check(k.holds(tol), d, to_string(r),
                            std::string(k.name) + " slack " + fmt(k.slack));
            }
        });
        // Implication chain at candidate prices on unfiltered admissible draws.
        auto chain = generate(property, ModelKind::Olg, cfg.audit_draws, cfg, accept_admissible,
                              result.rejected, 5);
        evaluate(result, chain, cfg, [&](const Draw& d, Outcome& o) {
            for (double dur : d.extra) {
                const auto c = olg::steady_conditions(d.params, dur,
                                                      olg::steady_state_prices(d.params, dur));
                o.check(!c.high_age2.holds(tol) || c.high_age1.holds(tol), d, "-",
                        "type-H age-2 holds but age-1 fails at D=" + fmt(dur));
                o.check(!c.low_age1.holds(tol) || c.low_age2.holds(tol), d, "-",
                        "type-L age-1 holds but age-2 fails at D=" + fmt(dur));
            }
        });
        break;
    }
    case Property::WelfareOrdering: {
        auto draws = generate(property, ModelKind::TwoPeriod, cfg.draws, cfg, accept_both_active,
                              result.rejected);
        evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
            const auto& p = d.params;
            const double t = two_period::optimal_durability(p, Regime::ThirdParty, opts);
            const double b = two_period::optimal_durability(p, Regime::Branded, opts);
            const double s = two_period::social_optimal_durability(p, opts);
            o.check(t < b && b < s, d, "both",
                    "D*_T=" + fmt(t) + " D*_B=" + fmt(b) + " D**=" + fmt(s));
            const double wt = two_period::welfare(p, t);
            const double wb = two_period::welfare(p, b);
            const double ws = two_period::welfare(p, s);
            o.check(wt < wb && wb < ws, d, "both",
                    "W_T=" + fmt(wt) + " W_B=" + fmt(wb) + " W**=" + fmt(ws));
        });
        break;
    }
    case Property::HarnessSelfTest: {
        auto draws = generate(property, ModelKind::TwoPeriod, std::min(cfg.draws, 10), cfg,
                              accept_both_active, result.rejected);
        evaluate(result, draws, cfg, [&](const Draw& d, Outcome& o) {
            const double t = two_period::optimal_durability(d.params, Regime::ThirdParty, opts);
            const double b = two_period::optimal_durability(d.params, Regime::Branded, opts);
            o.check(b < t, d, "both", "inverted: D*_B=" + fmt(b) + " D*_T=" + fmt(t));
        });
        break;
    }
    }
    return result;
}

VerificationReport run(const VerifyConfig& cfg)
{
    if (cfg.draws <= 0 || cfg.audit_draws <= 0 || cfg.oracle_draws <= 0)
        throw std::invalid_argument("empty verification");
    auto suite = cfg.properties;
    if (cfg.invert_self_test &&
        std::find(suite.begin(), suite.end(), Property::HarnessSelfTest) == suite.end())
        suite.push_back(Property::HarnessSelfTest);
    if (suite.empty())
        throw std::invalid_argument("empty verification");

    VerificationReport report;
    report.seed = cfg.seed;
    for (Property p : suite)
        report.results.push_back(run_property(p, cfg));
    return report;
}

}  // namespace recommerce::verification
