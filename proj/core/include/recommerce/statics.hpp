#pragma once

#include "recommerce/primitives.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recommerce::statics {

enum class Parameter { Alpha, Beta, Delta };

std::string_view to_string(Parameter parameter);
Parameter parse_parameter(std::string_view text);

double get(const ModelParams& params, Parameter parameter);
ModelParams with(ModelParams params, Parameter parameter, double value);

/// Optimized firm value at the given parameters: two-period screening profit
/// or the OLG objective, falling back to the D=0 value when inactive. No
/// validation, so perturbed parameters can be differenced.
struct ValuePoint {
    double d_star = 0.0;
    double value = 0.0;
    bool active = false;
    std::string mode;  ///< "active", "shutdown", "ic_violated" or "no_steady_state"
};

ValuePoint optimal_value(const ModelParams& params, ModelKind model, Regime regime,
                         const SolverOptions& opts = {});

/// d pi*/d alpha by the envelope theorem, evaluated at d_star.
double envelope_dpi_dalpha(const ModelParams& params, Regime regime, double d_star,
                           ModelKind model = ModelKind::TwoPeriod);
double envelope_dpi_dbeta(const ModelParams& params, Regime regime, double d_star,
                          ModelKind model = ModelKind::TwoPeriod);
double envelope_dpi_ddelta(const ModelParams& params, Regime regime, double d_star,
                           ModelKind model = ModelKind::TwoPeriod);

double envelope_derivative(const ModelParams& params, ModelKind model, Regime regime,
                           Parameter parameter, double d_star);

/// Centered difference of the re-optimized value: [V(x+h) - V(x-h)] / 2h.
double finite_difference(const ModelParams& params, ModelKind model, Regime regime,
                         Parameter parameter, double h = 1e-5, const SolverOptions& opts = {});

enum class Verdict { Holds, Violated, NotApplicable };
std::string_view to_string(Verdict verdict);

struct SweepPoint {
    double value = 0.0;
    double d_star = 0.0;
    double profit = 0.0;
    std::optional<double> welfare;  ///< two-period only
    double envelope = 0.0;
    double fd = 0.0;
    std::string mode;
    bool active = false;
    double delta_d = 0.0;       ///< D*_B - D*_T at this point
    double delta_profit = 0.0;  ///< pi*_B - pi*_T at this point
};

struct ComparativeReport {
    Parameter parameter = Parameter::Alpha;
    ModelKind model = ModelKind::TwoPeriod;
    Regime regime = Regime::ThirdParty;
    std::vector<SweepPoint> points;
    std::size_t excluded = 0;  ///< inactive grid points

    /// Expected direction: increasing in alpha, decreasing in beta, none for delta.
    Verdict d_verdict = Verdict::NotApplicable;
    Verdict profit_verdict = Verdict::NotApplicable;
    std::optional<double> optimal_beta;  ///< argmax over the grid of a branded beta sweep
};

/// n evenly spaced values from lo to hi inclusive (n=1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Solves every grid point (in parallel when jobs > 1) and assembles them in grid order.
ComparativeReport monotonicity_sweep(const ModelParams& params, ModelKind model, Regime regime,
                                     Parameter parameter, const std::vector<double>& grid,
                                     const SolverOptions& opts = {}, unsigned jobs = 1,
                                     double fd_step = 1e-5);

struct CommissionResult {
    double beta_star = 0.0;
    std::vector<double> betas;
    std::vector<double> profits;
    std::vector<bool> active;
    bool strictly_decreasing = true;  ///< across consecutive active points
};

/// Branded pi*(beta) on beta_k = k/points, k = 0..points-1; lowest-index argmax.
CommissionResult optimal_commission(const ModelParams& params,
                                    ModelKind model = ModelKind::TwoPeriod,
                                    std::size_t points = 1001, const SolverOptions& opts = {});

struct RegimeSide {
    bool active = false;
    double d_star = 0.0;
    double profit = 0.0;
    std::optional<double> welfare;
    std::optional<double> sustainability_gap;  ///< D** - D*, two-period only
};

struct RegimeComparison {
    ModelKind model = ModelKind::TwoPeriod;
    RegimeSide third_party;
    RegimeSide branded;
    std::optional<double> d_social;
    std::optional<double> delta_d;  ///< set only when both regimes are active
    std::optional<double> delta_profit;
    std::optional<double> delta_welfare;
};

RegimeComparison regime_comparison(const ModelParams& params, ModelKind model,
                                   const SolverOptions& opts = {});

}  // namespace recommerce::statics
