#include "recommerce/primitives.hpp"

#include "recommerce/root_find.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace recommerce {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_value(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void add(ValidationReport& report, std::string name, bool passed, std::string detail = {})
{
    report.checks.push_back({std::move(name), passed, passed ? std::string{} : std::move(detail)});
}

}  // namespace

std::string_view to_string(Regime regime)
{
    return regime == Regime::Branded ? "branded" : "third-party";
}

std::string_view to_string(ModelKind model)
{
    return model == ModelKind::Olg ? "olg" : "two-period";
}

Regime parse_regime(std::string_view text)
{
    if (text == "third-party" || text == "third_party" || text == "thirdparty")
        return Regime::ThirdParty;
    if (text == "branded")
        return Regime::Branded;
    throw std::invalid_argument("unknown regime '" + std::string(text) + "'");
}

ModelKind parse_model(std::string_view text)
{
    if (text == "two-period" || text == "two_period")
        return ModelKind::TwoPeriod;
    if (text == "olg")
        return ModelKind::Olg;
    throw std::invalid_argument("unknown model '" + std::string(text) + "'");
}

bool is_cost_family(const FunctionSpec& spec)
{
    return std::holds_alternative<PowerCost>(spec);
}

bool is_quality_family(const FunctionSpec& spec)
{
    return std::holds_alternative<SaturatingExpQuality>(spec) ||
           std::holds_alternative<RationalQuality>(spec);
}

std::string describe(const FunctionSpec& spec)
{
    return std::visit(
        overloaded{
            [](const PowerCost& f) {
                return "PowerCost(" + fmt_value(f.c0) + ", " + fmt_value(f.p) + ")";
            },
            [](const SaturatingExpQuality& f) {
                return "SaturatingExpQuality(" + fmt_value(f.s_bar) + ", " + fmt_value(f.k) + ")";
            },
            [](const RationalQuality& f) { return "RationalQuality(" + fmt_value(f.k) + ")"; },
        },
        spec);
}

Derivatives eval(const FunctionSpec& spec, double d)
{
    if (!(d >= 0.0))
        throw std::domain_error("eval: durability must be non-negative, got " + fmt_value(d));

    return std::visit(
        overloaded{
            [d](const PowerCost& f) {
                if (d == 0.0) {
                    // c''(0) is c0*p*(p-1)*0^(p-2): infinite for p<2, finite at p=2, zero above.
                    double second = 0.0;
                    if (f.p < 2.0)
                        second = std::numeric_limits<double>::infinity();
                    else if (f.p == 2.0)
                        second = 2.0 * f.c0;
                    const double first = f.p < 1.0   ? std::numeric_limits<double>::infinity()
                                         : f.p == 1.0 ? f.c0
                                                      : 0.0;
                    return Derivatives{0.0, first, second};
                }
                const double value = f.c0 * std::pow(d, f.p);
                return Derivatives{value, f.p * value / d, f.p * (f.p - 1.0) * value / (d * d)};
            },
            [d](const SaturatingExpQuality& f) {
                const double decay = std::exp(-f.k * d);
                return Derivatives{f.s_bar * -std::expm1(-f.k * d), f.s_bar * f.k * decay,
                                   -f.s_bar * f.k * f.k * decay};
            },
            [d](const RationalQuality& f) {
                const double denom = d + f.k;
                return Derivatives{d / denom, f.k / (denom * denom),
                                   -2.0 * f.k / (denom * denom * denom)};
            },
        },
        spec);
}

ModelParams canonical_params()
{
    return ModelParams{};
}

bool ValidationReport::ok() const
{
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

std::vector<CheckResult> ValidationReport::failures() const
{
    std::vector<CheckResult> out;
    for (const auto& c : checks)
        if (!c.passed)
            out.push_back(c);
    return out;
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.passed ? "  ok    " : "  FAIL  ") << c.name
           << (c.passed ? "" : " (" + c.detail + ")") << '\n';
    return os.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid model parameters:\n" + report.summary()),
      report_(std::move(report))
{
}

ValidationReport validate_params(const ModelParams& p, ModelKind model, double d_max)
{
    ValidationReport r;

    add(r, "v_H > v_L", p.v_high > p.v_low,
        "v_H=" + fmt_value(p.v_high) + " v_L=" + fmt_value(p.v_low));
    add(r, "v_L > 0", p.v_low > 0.0, "v_L=" + fmt_value(p.v_low));
    add(r, "0 < delta < 1", p.delta > 0.0 && p.delta < 1.0, "delta=" + fmt_value(p.delta));
    add(r, "0 < alpha <= 1", p.alpha > 0.0 && p.alpha <= 1.0, "alpha=" + fmt_value(p.alpha));
    add(r, "0 <= beta < 1", p.beta >= 0.0 && p.beta < 1.0, "beta=" + fmt_value(p.beta));
    add(r, "n_H > 0", p.n_high > 0.0, "n_H=" + fmt_value(p.n_high));
    add(r, "n_L > 0", p.n_low > 0.0, "n_L=" + fmt_value(p.n_low));

    if (model == ModelKind::TwoPeriod) {
        add(r, "n_L > n_H", p.n_low > p.n_high,
            "n_L=" + fmt_value(p.n_low) + " n_H=" + fmt_value(p.n_high));
    } else {
        add(r, "n_H + n_L = 1", std::abs(p.n_high + p.n_low - 1.0) <= 1e-12,
            "n_H + n_L=" + fmt_value(p.n_high + p.n_low));
        add(r, "2 n_L > n_H", 2.0 * p.n_low > p.n_high,
            "n_L=" + fmt_value(p.n_low) + " n_H=" + fmt_value(p.n_high));
    }

    add(r, "d_max > 0", d_max > 0.0, "d_max=" + fmt_value(d_max));

    // Family tags and parameter domains.
    bool cost_ok = false;
    if (const auto* f = std::get_if<PowerCost>(&p.cost)) {
        add(r, "cost c0 > 0", f->c0 > 0.0, "c0=" + fmt_value(f->c0));
        add(r, "c'(0)=0 / strict convexity (p > 1)", f->p > 1.0, "p=" + fmt_value(f->p));
        cost_ok = f->c0 > 0.0 && f->p > 1.0;
    } else {
        add(r, "cost family", false, describe(p.cost) + " is not a cost family");
    }

    bool quality_ok = false;
    if (const auto* f = std::get_if<SaturatingExpQuality>(&p.quality)) {
        add(r, "quality 0 < s_bar <= 1", f->s_bar > 0.0 && f->s_bar <= 1.0,
            "s_bar=" + fmt_value(f->s_bar));
        add(r, "quality k > 0", f->k > 0.0, "k=" + fmt_value(f->k));
        quality_ok = f->s_bar > 0.0 && f->s_bar <= 1.0 && f->k > 0.0;
    } else if (const auto* g = std::get_if<RationalQuality>(&p.quality)) {
        add(r, "quality k > 0", g->k > 0.0, "k=" + fmt_value(g->k));
        quality_ok = g->k > 0.0;
    } else {
        add(r, "quality family", false, describe(p.quality) + " is not a quality family");
    }

    if (!(d_max > 0.0))
        return r;

    // Curvature spot checks on a 100-point grid of [0, d_max].
    constexpr int kGrid = 100;
    if (cost_ok) {
        const auto at0 = eval(p.cost, 0.0);
        add(r, "c(0) = 0", at0.value == 0.0, "c(0)=" + fmt_value(at0.value));
        add(r, "c'(0) = 0", at0.first == 0.0, "c'(0)=" + fmt_value(at0.first));
        std::string bad;
        for (int i = 1; i < kGrid && bad.empty(); ++i) {
            const double d = d_max * i / (kGrid - 1);
            const auto v = eval(p.cost, d);
            if (!(v.value > 0.0 && v.first > 0.0 && v.second > 0.0))
                bad = "at D=" + fmt_value(d) + ": c=" + fmt_value(v.value) +
                      " c'=" + fmt_value(v.first) + " c''=" + fmt_value(v.second);
        }
        add(r, "c > 0, c' > 0, c'' > 0 on grid", bad.empty(), bad);
    }
    if (quality_ok) {
        const auto at0 = eval(p.quality, 0.0);
        add(r, "s(0) = 0", at0.value == 0.0, "s(0)=" + fmt_value(at0.value));
        std::string bad;
        for (int i = 0; i < kGrid && bad.empty(); ++i) {
            const double d = d_max * i / (kGrid - 1);
            const auto v = eval(p.quality, d);
            if (!(v.value < 1.0 && v.first > 0.0 && v.second < 0.0))
                bad = "at D=" + fmt_value(d) + ": s=" + fmt_value(v.value) +
                      " s'=" + fmt_value(v.first) + " s''=" + fmt_value(v.second);
        }
        add(r, "s < 1, s' > 0, s'' < 0 on grid", bad.empty(), bad);
    }
    if (cost_ok && quality_ok) {
        std::string bad;
        double prev = -std::numeric_limits<double>::infinity();
        for (int i = 1; i < kGrid && bad.empty(); ++i) {
            const double d = d_max * i / (kGrid - 1);
            const double ratio = eval(p.cost, d).first / eval(p.quality, d).first;
            if (!(ratio > prev))
                bad = "c'/s' not increasing at D=" + fmt_value(d);
            prev = ratio;
        }
        add(r, "c'/s' strictly increasing on grid", bad.empty(), bad);
    }
    return r;
}

double durability_foc_root(const ModelParams& params, double weight, const SolverOptions& opts)
{
    if (!(weight > 0.0))
        return 0.0;
    auto g = [&](double d) {
        return eval(params.cost, d).first - weight * eval(params.quality, d).first;
    };
    if (g(opts.d_max) <= 0.0)
        throw std::domain_error("durability FOC root lies beyond d_max=" + fmt_value(opts.d_max));
    return bisect_increasing(g, opts.bracket_low, opts.d_max, opts.d_tolerance);
}

double quality_inverse(const FunctionSpec& quality, double target, double d_max, double tolerance)
{
    if (target <= 0.0)
        return 0.0;
    if (eval(quality, d_max).value <= target)
        return d_max;
    auto g = [&](double d) { return eval(quality, d).value - target; };
    // Bisection keeps lo feasible; return the feasible end so s(result) <= target.
    double lo = 0.0, hi = d_max;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (g(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace recommerce
