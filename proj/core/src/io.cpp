#include "recommerce/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace recommerce::io {

using json = nlohmann::ordered_json;

namespace {

// ---- parsing ----------------------------------------------------------------

void expect_object(const json& j, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known)
{
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number())
        throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& where)
{
    if (!j.is_number_integer())
        throw ConfigError(where + ": expected an integer");
    return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& where)
{
    if (!j.is_string())
        throw ConfigError(where + ": expected a string");
    return j.get<std::string>();
}

template <class T, class F>
void read(const json& obj, const char* key, const std::string& where, T& out, F&& convert)
{
    if (auto it = obj.find(key); it != obj.end())
        out = convert(*it, where + "." + key);
}

FunctionSpec parse_function(const json& j, const std::string& where)
{
    expect_object(j, where);
    if (!j.contains("family"))
        throw ConfigError(where + ": missing 'family'");
    const std::string family = text(j.at("family"), where + ".family");
    if (family == "power") {
        reject_unknown(j, where, {"family", "c0", "p"});
        PowerCost f;
        read(j, "c0", where, f.c0, number);
        read(j, "p", where, f.p, number);
        return f;
    }
    if (family == "saturating_exp") {
        reject_unknown(j, where, {"family", "s_bar", "k"});
        SaturatingExpQuality f;
        read(j, "s_bar", where, f.s_bar, number);
        read(j, "k", where, f.k, number);
        return f;
    }
    if (family == "rational") {
        reject_unknown(j, where, {"family", "k"});
        RationalQuality f;
        read(j, "k", where, f.k, number);
        return f;
    }
    throw ConfigError(where + ": unknown family '" + family +
                      "' (expected power, saturating_exp or rational)");
}

ModelParams parse_params(const json& j)
{
    const std::string where = "params";
    expect_object(j, where);
    reject_unknown(j, where,
                   {"v_high", "v_low", "n_high", "n_low", "delta", "alpha", "beta", "cost", "quality"});
    ModelParams p;
    read(j, "v_high", where, p.v_high, number);
    read(j, "v_low", where, p.v_low, number);
    read(j, "n_high", where, p.n_high, number);
    read(j, "n_low", where, p.n_low, number);
    read(j, "delta", where, p.delta, number);
    read(j, "alpha", where, p.alpha, number);
    read(j, "beta", where, p.beta, number);
    read(j, "cost", where, p.cost, parse_function);
    read(j, "quality", where, p.quality, parse_function);
    return p;
}

SolverOptions parse_solver(const json& j)
{
    const std::string where = "solver";
    expect_object(j, where);
    reject_unknown(j, where, {"d_max", "d_tolerance", "constraint_tolerance"});
    SolverOptions s;
    read(j, "d_max", where, s.d_max, number);
    read(j, "d_tolerance", where, s.d_tolerance, number);
    read(j, "constraint_tolerance", where, s.constraint_tolerance, number);
    return s;
}

SweepSpec parse_sweep(const json& j)
{
    const std::string where = "sweep";
    expect_object(j, where);
    reject_unknown(j, where, {"parameter", "from", "to", "steps"});
    for (const char* key : {"parameter", "from", "to", "steps"})
        if (!j.contains(key))
            throw ConfigError(where + ": missing '" + key + "'");
    SweepSpec s;
    try {
        s.parameter = statics::parse_parameter(text(j.at("parameter"), where + ".parameter"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ".parameter: " + e.what());
    }
    s.from = number(j.at("from"), where + ".from");
    s.to = number(j.at("to"), where + ".to");
    s.steps = static_cast<int>(integer(j.at("steps"), where + ".steps"));
    return s;
}

VerifySpec parse_verify(const json& j)
{
    const std::string where = "verify";
    expect_object(j, where);
    reject_unknown(j, where,
                   {"seed", "draws", "audit_draws", "oracle_draws", "oracle_grid_points", "fd_step",
                    "fd_tolerance", "bind_tolerance"});
    VerifySpec v;
    auto as_int = [](const json& x, const std::string& w) { return static_cast<int>(integer(x, w)); };
    read(j, "seed", where, v.seed, [](const json& x, const std::string& w) {
        const auto s = integer(x, w);
        if (s < 0)
            throw ConfigError(w + ": must be non-negative");
        return static_cast<std::uint64_t>(s);
    });
    read(j, "draws", where, v.draws, as_int);
    read(j, "audit_draws", where, v.audit_draws, as_int);
    read(j, "oracle_draws", where, v.oracle_draws, as_int);
    read(j, "oracle_grid_points", where, v.oracle_grid_points,
         [](const json& x, const std::string& w) { return static_cast<std::size_t>(integer(x, w)); });
    read(j, "fd_step", where, v.fd_step, number);
    read(j, "fd_tolerance", where, v.fd_tolerance, number);
    read(j, "bind_tolerance", where, v.bind_tolerance, number);
    return v;
}

OutputSpec parse_output(const json& j)
{
    const std::string where = "output";
    expect_object(j, where);
    reject_unknown(j, where, {"dir", "formats"});
    OutputSpec o;
    read(j, "dir", where, o.dir, text);
    if (auto it = j.find("formats"); it != j.end()) {
        if (!it->is_array())
            throw ConfigError(where + ".formats: expected an array");
        o.csv = o.json = false;
        for (const auto& f : *it) {
            const auto name = text(f, where + ".formats[]");
            if (name == "csv")
                o.csv = true;
            else if (name == "json")
                o.json = true;
            else
                throw ConfigError(where + ".formats: unknown format '" + name + "'");
        }
    }
    return o;
}

// ---- writing ----------------------------------------------------------------

/// Rounds to 12 significant digits so the JSON dump matches the CSV text.
json num(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
}

json num(const std::optional<double>& x)
{
    return x ? num(*x) : json(nullptr);
}

std::string cell(const std::optional<double>& x)
{
    return x ? format_number(*x) : std::string{};
}

std::string join(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out += ',';
        out += fields[i];
    }
    out += '\n';
    return out;
}

json function_json(const FunctionSpec& f)
{
    json j;
    if (const auto* c = std::get_if<PowerCost>(&f)) {
        j["family"] = "power";
        j["c0"] = num(c->c0);
        j["p"] = num(c->p);
    } else if (const auto* s = std::get_if<SaturatingExpQuality>(&f)) {
        j["family"] = "saturating_exp";
        j["s_bar"] = num(s->s_bar);
        j["k"] = num(s->k);
    } else if (const auto* r = std::get_if<RationalQuality>(&f)) {
        j["family"] = "rational";
        j["k"] = num(r->k);
    }
    return j;
}

json params_object(const ModelParams& p)
{
    json j;
    j["v_high"] = num(p.v_high);
    j["v_low"] = num(p.v_low);
    j["n_high"] = num(p.n_high);
    j["n_low"] = num(p.n_low);
    j["delta"] = num(p.delta);
    j["alpha"] = num(p.alpha);
    j["beta"] = num(p.beta);
    j["cost"] = function_json(p.cost);
    j["quality"] = function_json(p.quality);
    return j;
}

json conditions_json(std::initializer_list<Condition> conditions, double tol)
{
    json out = json::array();
    for (const auto& c : conditions)
        out.push_back({{"name", std::string(c.name)}, {"slack", num(c.slack)}, {"holds", c.holds(tol)}});
    return out;
}

constexpr double kReportTolerance = SolverOptions{}.constraint_tolerance;

}  // namespace

RegimeSelector parse_regime_selector(std::string_view t)
{
    if (t == "both")
        return RegimeSelector::Both;
    return parse_regime(t) == Regime::Branded ? RegimeSelector::Branded : RegimeSelector::ThirdParty;
}

std::vector<Regime> regimes(RegimeSelector selector)
{
    switch (selector) {
    case RegimeSelector::ThirdParty: return {Regime::ThirdParty};
    case RegimeSelector::Branded: return {Regime::Branded};
    case RegimeSelector::Both: return {Regime::ThirdParty, Regime::Branded};
    }
    return {};
}

verification::VerifyConfig VerifySpec::resolve(const SolverOptions& solver) const
{
    if (!seed)
        throw ConfigError("verify: a seed is required for randomized verification");
    verification::VerifyConfig cfg;
    cfg.seed = *seed;
    cfg.solver = solver;
    if (draws)
        cfg.draws = *draws;
    if (audit_draws)
        cfg.audit_draws = *audit_draws;
    if (oracle_draws)
        cfg.oracle_draws = *oracle_draws;
    if (oracle_grid_points)
        cfg.oracle_grid_points = *oracle_grid_points;
    if (fd_step)
        cfg.fd_step = *fd_step;
    if (fd_tolerance)
        cfg.fd_tolerance = *fd_tolerance;
    if (bind_tolerance)
        cfg.bind_tolerance = *bind_tolerance;
    return cfg;
}

RunConfig parse_config(std::string_view content)
{
    json j;
    try {
        j = json::parse(content.begin(), content.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    expect_object(j, "config");
    reject_unknown(j, "config",
                   {"schema", "params", "model", "regime", "solver", "sweep", "verify", "output"});
    if (!j.contains("schema"))
        throw ConfigError("config: missing 'schema'");
    const auto schema = text(j.at("schema"), "schema");
    if (schema != kSchema)
        throw ConfigError("config: unsupported schema '" + schema + "' (expected " +
                          std::string(kSchema) + ")");

    RunConfig cfg;
    if (j.contains("params"))
        cfg.params = parse_params(j.at("params"));
    try {
        if (j.contains("model"))
            cfg.model = parse_model(text(j.at("model"), "model"));
        if (j.contains("regime"))
            cfg.regime = parse_regime_selector(text(j.at("regime"), "regime"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("solver"))
        cfg.solver = parse_solver(j.at("solver"));
    if (j.contains("sweep"))
        cfg.sweep = parse_sweep(j.at("sweep"));
    if (j.contains("verify"))
        cfg.verify = parse_verify(j.at("verify"));
    if (j.contains("output"))
        cfg.output = parse_output(j.at("output"));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string two_period_csv(const std::vector<two_period::TwoPeriodEquilibrium>& rows)
{
    std::string out = "regime,market_mode,D_star,D_social,p1n,p2n,p2u,profit_total,commission_revenue,welfare\n";
    for (const auto& eq : rows)
        out += join({std::string(to_string(eq.regime)), std::string(two_period::to_string(eq.mode)),
                     format_number(eq.d_star), format_number(eq.d_social), format_number(eq.p1n),
                     format_number(eq.p2n), cell(eq.p2u), format_number(eq.profit.total),
                     format_number(eq.profit.commission), format_number(eq.welfare)});
    return out;
}

std::string two_period_json(const ModelParams& params,
                            const std::vector<two_period::TwoPeriodEquilibrium>& rows)
{
    json j;
    j["model"] = "two-period";
    j["params"] = params_object(params);
    j["equilibria"] = json::array();
    for (const auto& eq : rows) {
        json e;
        e["regime"] = to_string(eq.regime);
        e["market_mode"] = two_period::to_string(eq.mode);
        e["D_star"] = num(eq.d_star);
        e["D_social"] = num(eq.d_social);
        e["sustainability_gap"] = num(eq.sustainability_gap());
        e["prices"] = {{"p1n", num(eq.p1n)}, {"p2n", num(eq.p2n)}, {"p2u", num(eq.p2u)}};
        e["profit"] = {{"total", num(eq.profit.total)},
                       {"period1", num(eq.profit.period1)},
                       {"period2", num(eq.profit.period2)},
                       {"commission", num(eq.profit.commission)}};
        e["welfare"] = num(eq.welfare);
        e["activity_margin"] = num(eq.activity_margin);
        e["active_profit"] = num(eq.active_profit);
        e["shutdown_profit"] = num(eq.shutdown_profit);
        e["profit_tie"] = eq.profit_tie;
        const auto& c = eq.conditions;
        e["conditions"] = conditions_json({c.high_ic, c.low_ic, c.high_ir, c.low_ir, c.high_period1_ir},
                                          kReportTolerance);
        e["best_feasible_D"] = num(eq.best_feasible_d);
        j["equilibria"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string olg_csv(const std::vector<olg::SteadyStateSolution>& rows)
{
    std::string out =
        "regime,objective,active,steady_state_exists,state,D_star,best_feasible_D,p_n,p_u,"
        "per_period_profit,commission_revenue,G,first_period_profit,objective_value,"
        "shutdown_value,pooling_value,condition_ratio_holds,note\n";
    for (const auto& s : rows)
        out += join({std::string(to_string(s.regime)), std::string(olg::to_string(s.objective)),
                     s.active ? "1" : "0", s.steady_state_exists ? "1" : "0",
                     s.state ? std::string(olg::to_string(*s.state)) : std::string{},
                     format_number(s.d_star), cell(s.best_feasible_d), format_number(s.p_new),
                     format_number(s.p_used), format_number(s.per_period_profit),
                     format_number(s.per_period.commission), format_number(s.stream),
                     format_number(s.first_period_profit), format_number(s.objective_value),
                     format_number(s.shutdown_value), format_number(s.pooling_value),
                     s.entry_ratio_holds ? "1" : "0", "\"" + s.note + "\""});
    return out;
}

std::string olg_json(const ModelParams& params, const std::vector<olg::SteadyStateSolution>& rows)
{
    json j;
    j["model"] = "olg";
    j["params"] = params_object(params);
    j["solutions"] = json::array();
    for (const auto& s : rows) {
        json e;
        e["regime"] = to_string(s.regime);
        e["objective"] = olg::to_string(s.objective);
        e["active"] = s.active;
        e["steady_state_exists"] = s.steady_state_exists;
        e["state"] = s.state ? json(std::string(olg::to_string(*s.state))) : json(nullptr);
        e["profile"] = s.profile ? json(s.profile->label()) : json(nullptr);
        e["D_star"] = num(s.d_star);
        e["best_feasible_D"] = num(s.best_feasible_d);
        e["p_n"] = num(s.p_new);
        e["p_u"] = num(s.p_used);
        e["per_period_profit"] = num(s.per_period_profit);
        e["per_period_sales"] = num(s.per_period.sales);
        e["per_period_commission"] = num(s.per_period.commission);
        e["G"] = num(s.stream);
        e["first_period_profit"] = num(s.first_period_profit);
        e["objective_value"] = num(s.objective_value);
        e["shutdown_value"] = num(s.shutdown_value);
        e["pooling_value"] = num(s.pooling_value);
        e["pooling_dominates"] = s.pooling_dominates;
        e["used_market"] = {{"supply", num(s.used_market.supply)},
                            {"demand", num(s.used_market.demand)},
                            {"rationed_fraction", num(s.used_market.rationed_fraction)}};
        if (s.feasibility) {
            const auto& f = *s.feasibility;
            const auto& c = f.conditions;
            e["feasibility"] = {
                {"state_consistent", f.state_consistent},
                {"market_clears", f.market_clears},
                {"best_responses", f.best_responses},
                {"dominated", f.dominated},
                {"conditions", conditions_json({c.high_age2, c.high_age1, c.low_ir, c.low_age1,
                                                c.low_age2, c.low_entry_ratio},
                                               kReportTolerance)},
            };
        } else {
            e["feasibility"] = nullptr;
        }
        e["note"] = s.note;
        j["solutions"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<statics::ComparativeReport>& reports)
{
    std::string out = "param_value,regime,D_star,profit,welfare,envelope_deriv,fd_deriv,market_mode\n";
    for (const auto& r : reports)
        for (const auto& pt : r.points)
            out += join({format_number(pt.value), std::string(to_string(r.regime)),
                         format_number(pt.d_star), format_number(pt.profit), cell(pt.welfare),
                         format_number(pt.envelope), format_number(pt.fd), pt.mode});
    return out;
}

std::string sweep_json(const std::vector<statics::ComparativeReport>& reports)
{
    json j = json::array();
    for (const auto& r : reports) {
        json e;
        e["parameter"] = statics::to_string(r.parameter);
        e["model"] = to_string(r.model);
        e["regime"] = to_string(r.regime);
        e["excluded"] = r.excluded;
        e["D_star_verdict"] = statics::to_string(r.d_verdict);
        e["profit_verdict"] = statics::to_string(r.profit_verdict);
        e["optimal_beta"] = num(r.optimal_beta);
        e["points"] = json::array();
        for (const auto& pt : r.points)
            e["points"].push_back({{"value", num(pt.value)},
                                   {"D_star", num(pt.d_star)},
                                   {"profit", num(pt.profit)},
                                   {"welfare", num(pt.welfare)},
                                   {"envelope_deriv", num(pt.envelope)},
                                   {"fd_deriv", num(pt.fd)},
                                   {"market_mode", pt.mode},
                                   {"delta_D", num(pt.delta_d)},
                                   {"delta_profit", num(pt.delta_profit)}});
        j.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string comparison_csv(const std::vector<statics::RegimeComparison>& rows)
{
    std::string out =
        "model,third_party_active,branded_active,D_star_third_party,D_star_branded,D_social,"
        "delta_D,delta_profit,delta_welfare,gap_third_party,gap_branded\n";
    for (const auto& c : rows)
        out += join({std::string(to_string(c.model)), c.third_party.active ? "1" : "0",
                     c.branded.active ? "1" : "0", format_number(c.third_party.d_star),
                     format_number(c.branded.d_star), cell(c.d_social), cell(c.delta_d),
                     cell(c.delta_profit), cell(c.delta_welfare),
                     cell(c.third_party.sustainability_gap), cell(c.branded.sustainability_gap)});
    return out;
}

std::string comparison_json(const ModelParams& params, const std::vector<statics::RegimeComparison>& rows)
{
    auto side = [](const statics::RegimeSide& s) {
        return json{{"active", s.active},
                    {"D_star", num(s.d_star)},
                    {"profit", num(s.profit)},
                    {"welfare", num(s.welfare)},
                    {"sustainability_gap", num(s.sustainability_gap)}};
    };
    json j;
    j["params"] = params_object(params);
    j["comparisons"] = json::array();
    for (const auto& c : rows)
        j["comparisons"].push_back({{"model", to_string(c.model)},
                                    {"third_party", side(c.third_party)},
                                    {"branded", side(c.branded)},
                                    {"D_social", num(c.d_social)},
                                    {"delta_D", num(c.delta_d)},
                                    {"delta_profit", num(c.delta_profit)},
                                    {"delta_welfare", num(c.delta_welfare)}});
    return j.dump(2) + "\n";
}

std::string feasibility_csv(const std::vector<FeasibilityRow>& rows)
{
    std::string out =
        "regime,D,state,profile,state_consistent,market_clears,high_age2,high_age1,low_ir,"
        "low_age1,low_age2,low_entry_ratio,best_responses,dominated,passes,dominance_reason\n";
    const double tol = kReportTolerance;
    for (const auto& [regime, r] : rows) {
        const auto& c = r.conditions;
        auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
        out += join({std::string(to_string(regime)), format_number(r.d),
                     std::string(olg::to_string(r.state)), r.profile.label(),
                     flag(r.state_consistent), flag(r.market_clears), flag(c.high_age2.holds(tol)),
                     flag(c.high_age1.holds(tol)), flag(c.low_ir.holds(tol)),
                     flag(c.low_age1.holds(tol)), flag(c.low_age2.holds(tol)),
                     flag(c.low_entry_ratio.holds(tol)), flag(r.best_responses), flag(r.dominated),
                     flag(r.passes()), "\"" + r.dominance_reason + "\""});
    }
    return out;
}

std::string verification_csv(const verification::VerificationReport& report)
{
    std::string out = "property,status,draws,rejected,checks,violations\n";
    for (const auto& r : report.results)
        out += join({std::string(verification::name(r.property)), r.passed() ? "pass" : "fail",
                     std::to_string(r.draws), std::to_string(r.rejected), std::to_string(r.checks),
                     std::to_string(r.violations)});
    return out;
}

namespace {

json counterexample_list(const verification::PropertyResult& r)
{
    json out = json::array();
    for (const auto& c : r.counterexamples)
        out.push_back({{"model", c.model},
                       {"regime", c.regime},
                       {"params", params_object(c.params)},
                       {"detail", c.detail}});
    return out;
}

}  // namespace

std::string verification_json(const verification::VerificationReport& report)
{
    json j;
    j["seed"] = report.seed;
    j["passed"] = report.all_passed();
    j["properties"] = json::array();
    for (const auto& r : report.results)
        j["properties"].push_back({{"property", verification::name(r.property)},
                                   {"description", verification::description(r.property)},
                                   {"passed", r.passed()},
                                   {"draws", r.draws},
                                   {"rejected", r.rejected},
                                   {"checks", r.checks},
                                   {"violations", r.violations},
                                   {"counterexamples", counterexample_list(r)}});
    return j.dump(2) + "\n";
}

std::string counterexamples_json(const verification::VerificationReport& report)
{
    json j = json::array();
    for (const auto& r : report.results)
        if (!r.passed())
            j.push_back({{"property", verification::name(r.property)},
                         {"counterexamples", counterexample_list(r)}});
    return j.dump(2) + "\n";
}

bool OracleRow::agrees() const
{
    return std::abs(solver_d - grid_d) <= step;
}

std::string oracle_csv(const std::vector<OracleRow>& rows)
{
    std::string out = "model,target,solver_D,grid_D,delta_D,grid_step,solver_value,grid_value,agrees\n";
    for (const auto& r : rows)
        out += join({r.model, r.target, format_number(r.solver_d), format_number(r.grid_d),
                     format_number(r.solver_d - r.grid_d), format_number(r.step),
                     format_number(r.solver_value), format_number(r.grid_value),
                     r.agrees() ? "1" : "0"});
    return out;
}

std::string params_json(const ModelParams& params)
{
    return params_object(params).dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace recommerce::io
