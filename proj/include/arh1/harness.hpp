#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "arh1/estimators.hpp"
#include "arh1/metrics.hpp"
#include "arh1/spectral_model.hpp"

namespace arh1 {

enum class OutputFormat { csv, json };

inline const std::vector<std::size_t> kDefaultTGrid = {250, 500, 750, 1000, 1250, 1500, 1750, 2000};

/// Monte Carlo experiment description. JSON field names match the member names.
struct ExperimentConfig {
  int example = 1;                          // 1, 2, 3; 0 selects `custom`
  std::optional<SpectralModelSpec> custom;  // required when example == 0
  std::vector<std::size_t> T_grid = kDefaultTGrid;
  std::size_t N = 1000;
  std::optional<TruncationRule> kT_rule;  // default: fixed:5 (examples 1-2, custom), power:4.1 (3)
  std::uint64_t seed = 0;
  RhoMode rho_mode = RhoMode::redraw_per_replication;
  std::vector<double> rho_values;  // explicit mode
  std::filesystem::path output_dir = ".";
  std::vector<OutputFormat> formats = {OutputFormat::csv};
  std::size_t workers = 0;  // 0 = hardware concurrency

  [[nodiscard]] SpectralModelSpec model() const;
  [[nodiscard]] TruncationRule truncation() const;
  [[nodiscard]] std::string example_label() const;
  void validate() const;
};

[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig& config);
[[nodiscard]] SpectralModelSpec model_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json model_to_json(const SpectralModelSpec& spec);

[[nodiscard]] std::string to_string(EstimatorKind kind);
[[nodiscard]] EstimatorKind estimator_from_string(const std::string& name);
[[nodiscard]] std::string to_string(RhoMode mode);
[[nodiscard]] RhoMode rho_mode_from_string(const std::string& name);

struct EfmseReport {
  std::string example;  // "1", "2", "3" or "custom"
  std::size_t T = 0;
  std::size_t N = 0;  // replications that contributed
  std::size_t kT = 0;
  EstimatorKind estimator = EstimatorKind::classical;
  double efmse_param = 0.0;
  double efmse_pred = 0.0;
  double t_efmse_param = 0.0;
  double theory_param_limit = 0.0;
  double theory_pred_limit = 0.0;
  double ref_one_over_T = 0.0;

  friend bool operator==(const EfmseReport&, const EfmseReport&) = default;
};

/// Finite-sample bound between the two estimators, checked on every
/// replication and component where rho_hat <= 1:
///   0 <= rho_hat - rho_tilde_minus <= sqrt(sigma2 (a + b - 2) / beta).
struct ProximityTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t skipped_rho_hat_above_one = 0;
};

struct ExperimentResult {
  std::vector<EfmseReport> reports;  // per T: classical, then bayes
  std::size_t attempted = 0;
  std::size_t aborted = 0;
  ProximityTally proximity;
  std::vector<double> fixed_rho;  // fixed/explicit modes: the coefficients used

  /// More than 0.1% of replications aborted on degenerate components.
  [[nodiscard]] bool aborted_threshold_exceeded() const noexcept;
};

inline constexpr double kAbortedFractionLimit = 0.001;

/// Runs the Monte Carlo study. Replication w at sample size T draws from the
/// stream keyed by derive_stream_key(seed, T, w); fixed-mode coefficients use
/// key (seed, 0, 0). Output is independent of the worker count.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes efmse.csv / efmse.json plus plot_param.csv and plot_pred.csv.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_reports(const std::vector<EfmseReport>& reports,
                                                const std::vector<OutputFormat>& formats,
                                                const std::filesystem::path& output_dir);

inline constexpr const char* kEfmseCsvHeader =
    "example,T,N,kT,estimator,efmse_param,efmse_pred,t_efmse_param,theory_param_limit,"
    "theory_pred_limit,ref_one_over_T";

[[nodiscard]] nlohmann::json report_to_json(const EfmseReport& report);
[[nodiscard]] EfmseReport report_from_json(const nlohmann::json& j);
[[nodiscard]] std::vector<EfmseReport> read_reports_json(const std::filesystem::path& path);

enum class DiagnosticKind { bartlett, normality, ergodic, positivity };

[[nodiscard]] std::string to_string(DiagnosticKind kind);
[[nodiscard]] DiagnosticKind diagnostic_from_string(const std::string& name);

/// Unset fields take kind-specific defaults:
///   bartlett   rho 0.6, sigma2 1, T 4000, N 4000
///   normality  rho 0.5, T 3000, N 2000
///   ergodic    rho 0.9, C 1, n 200000
///   positivity example 1, T 500, N 100, kT 5
struct DiagnosticParams {
  std::optional<double> rho;
  std::optional<double> sigma2;
  std::optional<double> C;
  std::optional<std::size_t> T;
  std::optional<std::size_t> N;
  std::optional<std::size_t> n;
  std::optional<int> example;
  std::optional<std::size_t> kT;
};

struct DiagnosticReport {
  DiagnosticKind kind;
  nlohmann::json record;     // inputs, outputs, targets, tolerance, pass
  std::optional<bool> pass;  // empty for informational diagnostics
};

[[nodiscard]] DiagnosticReport run_diagnostic(DiagnosticKind kind, const DiagnosticParams& params,
                                              std::uint64_t seed);

/// Runs the diagnostic and writes diag_<kind>.json into output_dir.
DiagnosticReport run_diagnostics(DiagnosticKind kind, const DiagnosticParams& params,
                                 std::uint64_t seed, const std::filesystem::path& output_dir);

}  // namespace arh1
