#pragma once

#include "recommerce/primitives.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace recommerce::verification {

/// Uniform sampling box for random draws. v_H is fixed and n_L = 1 - n_H.
struct DrawBox {
    double v_high = 1.0;
    double v_low_min = 0.5, v_low_max = 1.0;
    double alpha_min = 0.6, alpha_max = 1.0;
    double beta_min = 0.0, beta_max = 0.6;
    double delta_min = 0.5, delta_max = 0.95;
    double n_high_min = 0.1, n_high_max = 0.6;
};

/// Draws admissible parameters for the model (two-period draws also need n_L > n_H).
ModelParams sample_params(std::mt19937_64& rng, ModelKind model, const DrawBox& box = {});

/// Both regimes active: ActivePreOwned (two-period) or a passing steady state (OLG).
bool both_active(const ModelParams& params, ModelKind model, const SolverOptions& opts = {});

enum class Property {
    FocOracle,
    CanonicalRegression,
    Monotonicity,
    RegimeOrdering,
    CommissionZero,
    AlphaIncentive,
    SteadyStateUniqueness,
    ConstraintStructure,
    WelfareOrdering,
    HarnessSelfTest,
};

std::string_view name(Property property);
std::string_view description(Property property);
std::vector<Property> default_suite();

struct VerifyConfig {
    std::uint64_t seed = 42;
    int draws = 1000;          ///< properties 3-6 and 9
    int audit_draws = 200;     ///< properties 7-8
    int oracle_draws = 200;    ///< property 1, per (model, regime)
    std::size_t oracle_grid_points = 1000000;
    double oracle_d_max = 10.0;
    double fd_step = 1e-5;
    double fd_tolerance = 1e-4;
    double bind_tolerance = 1e-9;
    double price_tolerance = 1e-12;
    std::size_t commission_points = 1001;
    double ladder_step = 0.01;
    int max_attempts_per_draw = 5000;
    unsigned jobs = 1;
    bool invert_self_test = false;
    std::vector<Property> properties = default_suite();
    DrawBox box;
    SolverOptions solver;
};

struct Counterexample {
    std::string model;
    std::string regime;
    ModelParams params;
    std::string detail;
};

struct PropertyResult {
    Property property = Property::FocOracle;
    int draws = 0;       ///< accepted draws evaluated
    int rejected = 0;    ///< draws discarded by the activity filter
    long checks = 0;
    long violations = 0;
    std::vector<Counterexample> counterexamples;  ///< first few, in draw order

    bool passed() const { return draws > 0 && violations == 0; }
};

struct VerificationReport {
    std::uint64_t seed = 0;
    std::vector<PropertyResult> results;
    bool all_passed() const;
};

/// Throws std::invalid_argument on an empty run (no draws or no properties).
VerificationReport run(const VerifyConfig& config);
PropertyResult run_property(Property property, const VerifyConfig& config);

}  // namespace recommerce::verification
