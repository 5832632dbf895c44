#pragma once
// Experiment configuration, orchestration and reporting.
//
// A configuration is a flat JSON object (the CLI builds the same object from
// its flags). parse_config validates every field up front and reports all
// offending fields at once; nothing runs on a bad config.
//
// Keys:
//   kind         psi | bound | simulate_estimation | simulate_bandit | verify
//   alphas       nonempty array of tail levels in [0, 1)
//   n, delta     estimation problem; delta is a number, an array, or "optimal"
//   estimators   array of sample_mean | sign_commit | always_zero, or "all"
//   horizon, gap bandit problem; gap as for delta
//   policies     array of uniform | etc | ucb | thompson, or "all"
//   tau, ucb_c   policy parameters (tau 0 = default)
//   l_max, c_sep, gamma_h   general two-point template (bound only)
//   rho_max, rho_step       psi sweep
//   replicates, seed, threads
//   format       csv | json
//   out          output path; stdout when absent

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvarlb/policies.hpp"
#include "cvarlb/riskcore.hpp"
#include "cvarlb/sim.hpp"

namespace cvarlb::cli {

enum class ExperimentKind { Psi, Bound, SimulateEstimation, SimulateBandit, Verify };
enum class OutputFormat { Csv, Json };

std::string_view kind_name(ExperimentKind kind) noexcept;

/// Explicit parameter values, or the worst-case keyword "optimal".
struct ParamSpec {
    bool optimal = false;
    std::vector<double> values;
};

struct EstimationProblem {
    std::int64_t n = 1;
    ParamSpec delta;
    std::vector<sim::Estimator> estimators;
};

struct BanditProblem {
    std::int64_t horizon = 1;
    ParamSpec gap;
    std::vector<sim::PolicySpec> policies;
};

struct TemplateProblem {
    double l_max = 1.0;
    double c_sep = 1.0;
    double gamma_h = 0.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Psi;
    std::vector<riskcore::RiskLevel> alphas;
    std::optional<EstimationProblem> estimation;
    std::optional<BanditProblem> bandit;
    std::optional<TemplateProblem> two_point;
    double rho_max = 1.2;
    double rho_step = 0.01;
    std::int64_t replicates = 10'000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::optional<std::filesystem::path> output_path;
    OutputFormat format = OutputFormat::Csv;
};

struct FieldError {
    std::string field;
    std::string message;
};

/// Configuration rejected; carries one entry per offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<FieldError> errors);
    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    std::vector<FieldError> errors_;
};

/// Reading or writing a file failed; what() names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ValidationError listing every bad or unknown field.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON config file. Throws IoError if unreadable, ValidationError if
/// malformed.
nlohmann::json load_config_file(const std::filesystem::path& path);

struct ReportRow {
    double alpha = 0.0;
    std::string param_name;
    double param_value = 0.0;
    double bound = 0.0;
    double t_star = 0.0;
    std::optional<double> empirical_cvar;
    std::optional<double> exact_cvar;
    std::optional<double> standard_error;
    std::optional<double> mc_slack;
    bool dominated = true;
    std::string subject;        ///< policy/estimator name; empty for pure bound rows
    std::optional<double> psi;  ///< Psi_alpha(rho) on psi-sweep rows

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportMetadata {
    std::string kind;
    std::uint64_t seed = 0;
    std::int64_t replicates = 0;
    std::vector<std::string> subjects;
    double wall_time_seconds = 0.0;

    friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    ReportMetadata metadata;

    bool all_dominated() const noexcept;
};

/// Tail spread used for the dominance slack: with k = ceil((1 - alpha) N),
/// the sample standard deviation of the top k losses divided by sqrt(k)
/// (0 when k = 1).
double tail_standard_error(const riskcore::SampleSet& samples, riskcore::RiskLevel level);

/// 5 * tail_standard_error.
double mc_slack(const riskcore::SampleSet& samples, riskcore::RiskLevel level);

/// Deterministic given the config (apart from metadata.wall_time_seconds).
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Process exit status for a finished run: for verify, 0 iff every row is
/// dominated and 1 otherwise; 0 for every other kind.
int exit_status(const ExperimentConfig& config, const ExperimentReport& report) noexcept;

/// 12 significant digits, %g style.
std::string format_number(double v);

inline constexpr const char* kCsvHeader =
    "alpha,param_name,param_value,bound,t_star,empirical_cvar,exact_cvar,stderr,mc_slack,"
    "dominated";

std::string render_csv(const ExperimentReport& report);
nlohmann::json render_json(const ExperimentReport& report);
/// Inverse of render_json.
ExperimentReport parse_json_report(const nlohmann::json& doc);

/// Writes the report to path, or to out when path is empty. Throws IoError
/// with the path on failure.
void emit_report(const ExperimentReport& report, OutputFormat format,
                 const std::optional<std::filesystem::path>& path, std::ostream& out);

}  // namespace cvarlb::cli
