#pragma once

#include "recommerce/olg.hpp"
#include "recommerce/oracle.hpp"
#include "recommerce/primitives.hpp"
#include "recommerce/statics.hpp"
#include "recommerce/two_period.hpp"
#include "recommerce/verification.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace recommerce::io {

inline constexpr std::string_view kSchema = "recommerce.config/1";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RegimeSelector { ThirdParty, Branded, Both };
RegimeSelector parse_regime_selector(std::string_view text);
std::vector<Regime> regimes(RegimeSelector selector);

struct SweepSpec {
    statics::Parameter parameter = statics::Parameter::Alpha;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

/// Every field optional; unset fields keep VerifyConfig defaults.
struct VerifySpec {
    std::optional<std::uint64_t> seed;
    std::optional<int> draws;
    std::optional<int> audit_draws;
    std::optional<int> oracle_draws;
    std::optional<std::size_t> oracle_grid_points;
    std::optional<double> fd_step;
    std::optional<double> fd_tolerance;
    std::optional<double> bind_tolerance;

    /// Throws ConfigError when no seed is set.
    verification::VerifyConfig resolve(const SolverOptions& solver) const;
};

struct OutputSpec {
    std::optional<std::string> dir;
    bool csv = true;
    bool json = true;
};

struct RunConfig {
    ModelParams params;
    ModelKind model = ModelKind::TwoPeriod;
    RegimeSelector regime = RegimeSelector::Both;
    SolverOptions solver;
    std::optional<SweepSpec> sweep;
    VerifySpec verify;
    OutputSpec output;
};

/// Parses a JSON config. Unknown keys are rejected at every level; a
/// "schema" field equal to kSchema is required. Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// "%.12g"; empty string for NaN.
std::string format_number(double x);

// CSV column orders are fixed; see README.
std::string two_period_csv(const std::vector<two_period::TwoPeriodEquilibrium>& rows);
std::string two_period_json(const ModelParams& params,
                            const std::vector<two_period::TwoPeriodEquilibrium>& rows);

std::string olg_csv(const std::vector<olg::SteadyStateSolution>& rows);
std::string olg_json(const ModelParams& params, const std::vector<olg::SteadyStateSolution>& rows);

std::string sweep_csv(const std::vector<statics::ComparativeReport>& reports);
std::string sweep_json(const std::vector<statics::ComparativeReport>& reports);

std::string comparison_csv(const std::vector<statics::RegimeComparison>& rows);
std::string comparison_json(const ModelParams& params,
                            const std::vector<statics::RegimeComparison>& rows);

struct FeasibilityRow {
    Regime regime = Regime::ThirdParty;
    olg::FeasibilityReport report;
};
std::string feasibility_csv(const std::vector<FeasibilityRow>& rows);

std::string verification_csv(const verification::VerificationReport& report);
std::string verification_json(const verification::VerificationReport& report);
std::string counterexamples_json(const verification::VerificationReport& report);

struct OracleRow {
    std::string model;
    std::string target;  ///< regime name or "social"
    double solver_d = 0.0;
    double grid_d = 0.0;
    double step = 0.0;
    double solver_value = 0.0;
    double grid_value = 0.0;
    bool agrees() const;
};
std::string oracle_csv(const std::vector<OracleRow>& rows);

std::string params_json(const ModelParams& params);

/// Creates parent directories as needed; throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace recommerce::io
