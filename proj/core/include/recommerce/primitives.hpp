#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace recommerce {

/// Who operates the pre-owned marketplace and keeps the commission.
enum class Regime { ThirdParty, Branded };

enum class ModelKind { TwoPeriod, Olg };

std::string_view to_string(Regime regime);
std::string_view to_string(ModelKind model);
Regime parse_regime(std::string_view text);
ModelKind parse_model(std::string_view text);

/// c(D) = c0 * D^p, p > 1.
struct PowerCost {
    double c0 = 0.5;
    double p = 2.0;
};

/// s(D) = s_bar * (1 - exp(-k D)).
struct SaturatingExpQuality {
    double s_bar = 1.0;
    double k = 1.0;
};

/// s(D) = D / (D + k).
struct RationalQuality {
    double k = 1.0;
};

/// Closed enumeration of cost and quality families. Each alternative has exact
/// value, first and second derivatives.
using FunctionSpec = std::variant<PowerCost, SaturatingExpQuality, RationalQuality>;

struct Derivatives {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

bool is_cost_family(const FunctionSpec& spec);
bool is_quality_family(const FunctionSpec& spec);
std::string describe(const FunctionSpec& spec);

/// Exact closed-form (f, f', f'') at durability d. Throws std::domain_error for d < 0.
Derivatives eval(const FunctionSpec& spec, double d);

/// Model primitives. Valuations are per unit of quality; shares are population masses.
struct ModelParams {
    double v_high = 1.0;
    double v_low = 0.8;
    double n_high = 0.3;
    double n_low = 0.7;
    double delta = 0.9;  ///< discount factor
    double alpha = 0.9;  ///< used-good willingness-to-pay deflator
    double beta = 0.2;   ///< marketplace commission on the used-good price
    FunctionSpec cost = PowerCost{};
    FunctionSpec quality = SaturatingExpQuality{};

    double c(double d) const { return eval(cost, d).value; }
    double s(double d) const { return eval(quality, d).value; }
};

/// v_H=1, v_L=0.8, n_H=0.3, n_L=0.7, delta=0.9, alpha=0.9, beta=0.2, c=0.5D^2, s=1-e^-D.
ModelParams canonical_params();

/// Numerical settings shared by the solvers.
struct SolverOptions {
    double d_max = 10.0;
    double d_tolerance = 1e-10;
    double bracket_low = 1e-12;
    double constraint_tolerance = 1e-9;
};

/// Slack of one screening condition (lhs - rhs); holds when slack >= -tol.
struct Condition {
    std::string_view name;
    double slack = 0.0;
    bool holds(double tol) const { return slack >= -tol; }
    bool binds(double tol) const { return std::abs(slack) <= tol; }
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    std::vector<CheckResult> failures() const;
    std::string summary() const;
};

/// Checks every scalar and curvature assumption for the given model. Violations
/// are reported, never thrown. Curvature is spot-checked on a 100-point grid of
/// [0, d_max].
ValidationReport validate_params(const ModelParams& params, ModelKind model,
                                 double d_max = SolverOptions{}.d_max);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Root of c'(D) = weight * s'(D) on [bracket_low, d_max] by bisection.
/// Returns 0 when weight <= 0 (the marginal cost dominates everywhere).
/// Throws std::domain_error if the root lies beyond d_max.
double durability_foc_root(const ModelParams& params, double weight,
                           const SolverOptions& opts = {});

/// Largest D in [0, d_max] with s(D) <= target (s is increasing).
double quality_inverse(const FunctionSpec& quality, double target, double d_max,
                       double tolerance = 1e-12);

}  // namespace recommerce
