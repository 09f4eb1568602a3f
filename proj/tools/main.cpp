#include "recommerce/io.hpp"
#include "recommerce/olg.hpp"
#include "recommerce/oracle.hpp"
#include "recommerce/statics.hpp"
#include "recommerce/two_period.hpp"
#include "recommerce/verification.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace recommerce;

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config;
    std::string out;
    std::string model;
    std::string regime;
    std::string format;
    unsigned jobs = 1;
    std::optional<double> alpha, beta, delta, v_low, v_high, n_high, n_low;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool model_flag = true)
{
    cmd->add_option("-c,--config", o.config, "JSON config file");
    cmd->add_option("-o,--out", o.out, "output directory (overrides RECOMMERCE_OUT and config)");
    if (model_flag)
        cmd->add_option("--model", o.model, "two-period or olg");
    cmd->add_option("--regime", o.regime, "third-party, branded or both");
    cmd->add_option("--format", o.format, "csv, json or both");
    cmd->add_option("-j,--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", o.alpha, "override alpha");
    cmd->add_option("--beta", o.beta, "override beta");
    cmd->add_option("--delta", o.delta, "override delta");
    cmd->add_option("--v-low", o.v_low, "override v_L");
    cmd->add_option("--v-high", o.v_high, "override v_H");
    cmd->add_option("--n-high", o.n_high, "override n_H");
    cmd->add_option("--n-low", o.n_low, "override n_L");
}

io::RunConfig resolve(const CommonOptions& o)
{
    io::RunConfig cfg;
    if (!o.config.empty()) {
        if (!fs::exists(o.config))
            throw UsageError("config file not found: " + o.config);
        cfg = io::load_config(o.config);
    }
    try {
        if (!o.model.empty())
            cfg.model = parse_model(o.model);
        if (!o.regime.empty())
            cfg.regime = io::parse_regime_selector(o.regime);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!o.format.empty()) {
        if (o.format == "csv")
            cfg.output.csv = true, cfg.output.json = false;
        else if (o.format == "json")
            cfg.output.csv = false, cfg.output.json = true;
        else if (o.format == "both")
            cfg.output.csv = cfg.output.json = true;
        else
            throw UsageError("unknown format '" + o.format + "'");
    }
    auto set = [](const std::optional<double>& v, double& field) {
        if (v)
            field = *v;
    };
    set(o.alpha, cfg.params.alpha);
    set(o.beta, cfg.params.beta);
    set(o.delta, cfg.params.delta);
    set(o.v_low, cfg.params.v_low);
    set(o.v_high, cfg.params.v_high);
    set(o.n_high, cfg.params.n_high);
    set(o.n_low, cfg.params.n_low);
    return cfg;
}

fs::path output_dir(const CommonOptions& o, const io::RunConfig& cfg)
{
    if (!o.out.empty())
        return o.out;
    if (const char* env = std::getenv("RECOMMERCE_OUT"); env && *env)
        return env;
    if (cfg.output.dir)
        return *cfg.output.dir;
    return ".";
}

void emit(const fs::path& dir, const std::string& stem, const io::RunConfig& cfg,
          const std::string& csv, const std::string& json)
{
    if (cfg.output.csv) {
        io::write_file(dir / (stem + ".csv"), csv);
        std::cout << "wrote " << (dir / (stem + ".csv")).string() << '\n';
    }
    if (cfg.output.json) {
        io::write_file(dir / (stem + ".json"), json);
        std::cout << "wrote " << (dir / (stem + ".json")).string() << '\n';
    }
}

void validate_or_throw(const io::RunConfig& cfg)
{
    auto report = validate_params(cfg.params, cfg.model, cfg.solver.d_max);
    if (!report.ok())
        throw ValidationError(std::move(report));
}

std::string num(double x)
{
    return io::format_number(x);
}

// ---- solve ------------------------------------------------------------------

int cmd_solve(const CommonOptions& o)
{
    const auto cfg = resolve(o);
    validate_or_throw(cfg);
    const auto dir = output_dir(o, cfg);

    if (cfg.model == ModelKind::TwoPeriod) {
        std::vector<two_period::TwoPeriodEquilibrium> rows;
        for (Regime r : io::regimes(cfg.regime))
            rows.push_back(two_period::solve(cfg.params, r, cfg.solver));
        std::printf("%-12s %-12s %-10s %-10s %-10s %-10s %-10s %-10s %-10s %-10s\n", "regime", "mode",
                    "D*", "D**", "gap", "p1n", "p2n", "p2u", "profit", "commission");
        for (const auto& eq : rows) {
            std::printf("%-12s %-12s %-10.6g %-10.6g %-10.6g %-10.6g %-10.6g %-10s %-10.6g %-10.6g\n",
                        std::string(to_string(eq.regime)).c_str(),
                        std::string(two_period::to_string(eq.mode)).c_str(), eq.d_star, eq.d_social,
                        eq.sustainability_gap(), eq.p1n, eq.p2n,
                        eq.p2u ? num(*eq.p2u).substr(0, 10).c_str() : "-", eq.profit.total,
                        eq.profit.commission);
            if (eq.mode == two_period::MarketMode::Shutdown)
                std::printf("  %s: market shutdown, lower types excluded\n",
                            std::string(to_string(eq.regime)).c_str());
            if (eq.best_feasible_d)
                std::printf("  %s: type-L IC fails at D*; largest feasible D = %s\n",
                            std::string(to_string(eq.regime)).c_str(), num(*eq.best_feasible_d).c_str());
        }
        emit(dir, "solve_two_period", cfg, io::two_period_csv(rows),
             io::two_period_json(cfg.params, rows));
    } else {
        std::vector<olg::SteadyStateSolution> rows;
        for (Regime r : io::regimes(cfg.regime))
            rows.push_back(olg::optimal_durability_olg(cfg.params, r, cfg.solver));
        std::printf("%-12s %-8s %-8s %-10s %-10s %-10s %-12s %-10s %-10s\n", "regime", "active",
                    "steady", "D*", "p_n", "p_u", "per-period", "G", "objective");
        for (const auto& s : rows) {
            std::printf("%-12s %-8s %-8s %-10.6g %-10.6g %-10.6g %-12.6g %-10.6g %-10.6g\n",
                        std::string(to_string(s.regime)).c_str(), s.active ? "yes" : "no",
                        s.steady_state_exists ? "yes" : "no", s.d_star, s.p_new, s.p_used,
                        s.per_period_profit, s.stream, s.objective_value);
            if (!s.active)
                std::printf("  %s: market shutdown, lower types excluded\n",
                            std::string(to_string(s.regime)).c_str());
            else if (!s.note.empty())
                std::printf("  %s: %s\n", std::string(to_string(s.regime)).c_str(), s.note.c_str());
        }
        emit(dir, "solve_olg", cfg, io::olg_csv(rows), io::olg_json(cfg.params, rows));
    }
    return kOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
    std::string parameter;
    std::optional<double> from, to;
    std::optional<int> steps;
};

int cmd_sweep(const CommonOptions& o, const SweepOptions& s)
{
    auto cfg = resolve(o);
    io::SweepSpec spec = cfg.sweep.value_or(io::SweepSpec{});
    if (!s.parameter.empty()) {
        try {
            spec.parameter = statics::parse_parameter(s.parameter);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (s.from)
        spec.from = *s.from;
    if (s.to)
        spec.to = *s.to;
    if (s.steps)
        spec.steps = *s.steps;
    if (!cfg.sweep && (s.parameter.empty() || !s.from || !s.to || !s.steps))
        throw UsageError("sweep needs parameter, from, to and steps (config or flags)");
    if (spec.steps < 1)
        throw UsageError("sweep steps must be at least 1");
    validate_or_throw(cfg);

    const auto grid = statics::linspace(spec.from, spec.to, static_cast<std::size_t>(spec.steps));
    std::vector<statics::ComparativeReport> reports;
    std::size_t active = 0;
    for (Regime r : io::regimes(cfg.regime)) {
        reports.push_back(statics::monotonicity_sweep(cfg.params, cfg.model, r, spec.parameter, grid,
                                                      cfg.solver, o.jobs));
        active += reports.back().points.size() - reports.back().excluded;
    }
    for (const auto& r : reports)
        std::printf("%s sweep, %s: %zu points, %zu excluded, D* %s, profit %s%s\n",
                    std::string(statics::to_string(r.parameter)).c_str(),
                    std::string(to_string(r.regime)).c_str(), r.points.size(), r.excluded,
                    std::string(statics::to_string(r.d_verdict)).c_str(),
                    std::string(statics::to_string(r.profit_verdict)).c_str(),
                    r.optimal_beta ? (", optimal beta " + num(*r.optimal_beta)).c_str() : "");
    if (active == 0) {
        std::cerr << "error: empty active region, every grid point is in shutdown\n";
        return kUsageError;
    }
    emit(output_dir(o, cfg), "sweep", cfg, io::sweep_csv(reports), io::sweep_json(reports));
    return kOk;
}

// ---- compare ----------------------------------------------------------------

int cmd_compare(const CommonOptions& o)
{
    const auto cfg = resolve(o);
    std::vector<statics::RegimeComparison> rows;
    for (ModelKind model : {ModelKind::TwoPeriod, ModelKind::Olg}) {
        if (!o.model.empty() && model != cfg.model)
            continue;
        auto report = validate_params(cfg.params, model, cfg.solver.d_max);
        if (!report.ok()) {
            std::printf("%s: parameters invalid for this model, skipped\n%s",
                        std::string(to_string(model)).c_str(), report.summary().c_str());
            continue;
        }
        rows.push_back(statics::regime_comparison(cfg.params, model, cfg.solver));
    }
    if (rows.empty())
        throw UsageError("no model accepts these parameters");
    for (const auto& c : rows) {
        std::printf("%s: third-party %s D*=%s, branded %s D*=%s\n",
                    std::string(to_string(c.model)).c_str(),
                    c.third_party.active ? "active" : "inactive", num(c.third_party.d_star).c_str(),
                    c.branded.active ? "active" : "inactive", num(c.branded.d_star).c_str());
        if (c.delta_d)
            std::printf("  D*_B - D*_T = %s, profit_B - profit_T = %s\n", num(*c.delta_d).c_str(),
                        num(*c.delta_profit).c_str());
        else
            std::printf("  one-sided comparison (not both regimes active)\n");
        if (c.delta_welfare)
            std::printf("  welfare_B - welfare_T = %s, D** = %s\n", num(*c.delta_welfare).c_str(),
                        num(*c.d_social).c_str());
    }
    emit(output_dir(o, cfg), "compare", cfg, io::comparison_csv(rows),
         io::comparison_json(cfg.params, rows));
    return kOk;
}

// ---- olg-verify -------------------------------------------------------------

int cmd_olg_verify(const CommonOptions& o, std::optional<double> at_d)
{
    auto cfg = resolve(o);
    cfg.model = ModelKind::Olg;
    validate_or_throw(cfg);

    std::vector<io::FeasibilityRow> rows;
    bool unique_everywhere = true;
    for (Regime r : io::regimes(cfg.regime)) {
        const auto sol = olg::solve_unchecked(cfg.params, r, cfg.solver);
        const double d = at_d.value_or(sol.d_star);
        int passing = 0;
        for (auto state : {olg::State::Empty, olg::State::HighOnly, olg::State::Full}) {
            for (const auto& profile : olg::enumerate_profiles(state)) {
                auto rep = olg::check_steady_state(cfg.params, r, d, state, profile, cfg.solver);
                passing += rep.passes() ? 1 : 0;
                rows.push_back({r, std::move(rep)});
            }
        }
        std::printf("%s: D=%s, %d of 243 candidates pass%s\n", std::string(to_string(r)).c_str(),
                    num(d).c_str(), passing,
                    sol.steady_state_exists || at_d ? "" : " (no active steady state at D*)");
        if ((sol.steady_state_exists || at_d) && passing > 1)
            unique_everywhere = false;
        if (sol.steady_state_exists && !at_d && passing != 1)
            unique_everywhere = false;
    }
    io::write_file(output_dir(o, cfg) / "olg_feasibility.csv", io::feasibility_csv(rows));
    std::cout << "wrote " << (output_dir(o, cfg) / "olg_feasibility.csv").string() << '\n';
    return unique_everywhere ? kOk : kPropertyFailure;
}

// ---- verify -----------------------------------------------------------------

struct VerifyOptions {
    std::optional<std::uint64_t> seed;
    std::optional<int> draws;
    std::optional<int> audit_draws;
    std::optional<int> oracle_draws;
    std::optional<std::size_t> grid;
    bool invert = false;
};

int cmd_verify(const CommonOptions& o, const VerifyOptions& v)
{
    auto cfg = resolve(o);
    auto spec = cfg.verify;
    if (v.seed)
        spec.seed = v.seed;
    if (v.draws)
        spec.draws = v.draws;
    if (v.audit_draws)
        spec.audit_draws = v.audit_draws;
    if (v.oracle_draws)
        spec.oracle_draws = v.oracle_draws;
    if (v.grid)
        spec.oracle_grid_points = v.grid;
    // A single draw count caps every property unless set separately.
    if (spec.draws && *spec.draws <= 0) {
        std::cerr << "error: empty verification (draws=" << *spec.draws << ")\n";
        return kUsageError;
    }
    if (spec.draws) {
        if (!spec.audit_draws)
            spec.audit_draws = std::min(*spec.draws, verification::VerifyConfig{}.audit_draws);
        if (!spec.oracle_draws)
            spec.oracle_draws = std::min(*spec.draws, verification::VerifyConfig{}.oracle_draws);
    }

    verification::VerifyConfig vc;
    try {
        vc = spec.resolve(cfg.solver);
    } catch (const io::ConfigError& e) {
        throw UsageError(e.what());
    }
    vc.jobs = o.jobs;
    vc.invert_self_test = v.invert;

    verification::VerificationReport report;
    try {
        report = verification::run(vc);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }

    std::printf("%-30s %-6s %8s %10s %10s %10s\n", "property", "status", "draws", "rejected",
                "checks", "violations");
    for (const auto& r : report.results)
        std::printf("%-30s %-6s %8d %10d %10ld %10ld\n",
                    std::string(verification::name(r.property)).c_str(), r.passed() ? "pass" : "FAIL",
                    r.draws, r.rejected, r.checks, r.violations);

    const auto dir = output_dir(o, cfg);
    emit(dir, "verify", cfg, io::verification_csv(report), io::verification_json(report));
    if (!report.all_passed()) {
        io::write_file(dir / "counterexamples.json", io::counterexamples_json(report));
        std::cout << "wrote " << (dir / "counterexamples.json").string() << '\n';
        for (const auto& r : report.results)
            for (const auto& c : r.counterexamples)
                std::printf("counterexample [%s] %s %s: %s\n",
                            std::string(verification::name(r.property)).c_str(), c.model.c_str(),
                            c.regime.c_str(), c.detail.c_str());
        return kPropertyFailure;
    }
    return kOk;
}

// ---- oracle-check -----------------------------------------------------------

int cmd_oracle_check(const CommonOptions& o, std::size_t points)
{
    const auto cfg = resolve(o);
    const oracle::GridSpec grid{cfg.solver.d_max, points};
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto table = oracle::GridTable::build(cfg.params.cost, cfg.params.quality, grid);

    std::vector<io::OracleRow> rows;
    for (ModelKind model : {ModelKind::TwoPeriod, ModelKind::Olg}) {
        if (!o.model.empty() && model != cfg.model)
            continue;
        if (!validate_params(cfg.params, model, cfg.solver.d_max).ok()) {
            std::printf("%s: parameters invalid for this model, skipped\n",
                        std::string(to_string(model)).c_str());
            continue;
        }
        for (Regime r : io::regimes(cfg.regime)) {
            const auto v = statics::optimal_value(cfg.params, model, r, cfg.solver);
            const auto hat = oracle::grid_argmax_profit(cfg.params, r, model, table);
            rows.push_back({std::string(to_string(model)), std::string(to_string(r)), v.d_star,
                            hat.d_hat, hat.step, v.value, hat.value});
        }
        if (model == ModelKind::TwoPeriod) {
            const double ds = two_period::social_optimal_durability(cfg.params, cfg.solver);
            const auto hat = oracle::grid_argmax_welfare(cfg.params, table);
            rows.push_back({"two-period", "social", ds, hat.d_hat, hat.step,
                            two_period::welfare(cfg.params, ds), hat.value});
        }
    }
    if (rows.empty())
        throw UsageError("no model accepts these parameters");

    bool ok = true;
    std::printf("%-11s %-12s %-14s %-14s %-12s %s\n", "model", "target", "solver D", "grid D",
                "delta", "agrees");
    for (const auto& r : rows) {
        std::printf("%-11s %-12s %-14s %-14s %-12s %s\n", r.model.c_str(), r.target.c_str(),
                    num(r.solver_d).c_str(), num(r.grid_d).c_str(), num(r.solver_d - r.grid_d).c_str(),
                    r.agrees() ? "yes" : "NO");
        ok = ok && r.agrees();
    }
    io::write_file(output_dir(o, cfg) / "oracle_check.csv", io::oracle_csv(rows));
    std::cout << "wrote " << (output_dir(o, cfg) / "oracle_check.csv").string() << '\n';
    return ok ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Durability choice under branded and third-party recommerce"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* solve = app.add_subcommand("solve", "solve for optimal durability, prices and profit");
    add_common(solve, common);

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "comparative statics over alpha, beta or delta");
    add_common(sweep, common);
    sweep->add_option("--param", sweep_opts.parameter, "alpha, beta or delta");
    sweep->add_option("--from", sweep_opts.from, "first grid value");
    sweep->add_option("--to", sweep_opts.to, "last grid value");
    sweep->add_option("--steps", sweep_opts.steps, "number of grid points");

    auto* compare = app.add_subcommand("compare", "branded versus third-party regime comparison");
    add_common(compare, common);

    std::optional<double> olg_d;
    auto* olg_verify = app.add_subcommand("olg-verify", "per-profile steady-state feasibility table");
    add_common(olg_verify, common, false);
    olg_verify->add_option("--durability", olg_d, "evaluate at this D instead of D*");

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "run the randomized property suite");
    add_common(verify, common, false);
    verify->add_option("--seed", verify_opts.seed, "random seed (required unless in config)");
    verify->add_option("--draws", verify_opts.draws, "draws per property");
    verify->add_option("--audit-draws", verify_opts.audit_draws, "draws for the OLG audit properties");
    verify->add_option("--oracle-draws", verify_opts.oracle_draws, "draws per model for the grid oracle");
    verify->add_option("--grid-points", verify_opts.grid, "oracle grid size");
    verify->add_flag("--invert-self-test", verify_opts.invert,
                     "add a deliberately inverted assertion (harness check)");

    std::size_t oracle_points = 100000;
    auto* oracle_check = app.add_subcommand("oracle-check", "compare solver optima against a grid search");
    add_common(oracle_check, common);
    oracle_check->add_option("--grid-points", oracle_points, "grid size (at least 1000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*solve)
            return cmd_solve(common);
        if (*sweep)
            return cmd_sweep(common, sweep_opts);
        if (*compare)
            return cmd_compare(common);
        if (*olg_verify)
            return cmd_olg_verify(common, olg_d);
        if (*verify)
            return cmd_verify(common, verify_opts);
        if (*oracle_check)
            return cmd_oracle_check(common, oracle_points);
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid parameters\n" << e.report().summary();
        return kUsageError;
    } catch (const io::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
