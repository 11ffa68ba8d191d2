#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "arh1/random.hpp"
#include "arh1/simulator.hpp"
#include "arh1/spectral_model.hpp"

namespace arh1 {

/// One Monte Carlo replication: estimates and true coefficients for j <= k_T,
/// and the last observed coefficient vector X_T (first k_T entries are used).
struct ReplicationRecord {
  std::vector<double> estimates;
  std::vector<double> truth;
  std::vector<double> xT;
};

struct EfmseInput {
  std::vector<ReplicationRecord> records;
};

/// (1/N) sum_w sum_{j<=k_T} (est_j - rho_j)^2
[[nodiscard]] double efmse_param(const EfmseInput& input);
/// (1/N) sum_w sum_{j<=k_T} (est_j - rho_j)^2 X_{T,j}^2
[[nodiscard]] double efmse_pred(const EfmseInput& input);

/// sum_{j<=k_T} (1 - rho_j^2): limit of T * efmse_param.
[[nodiscard]] double theory_param_limit(const ModelRealization& real, std::size_t k_T);
/// sum_{j<=k_T} C_j (1 - rho_j^2) = sum sigma2_j: limit of T * efmse_pred.
[[nodiscard]] double theory_pred_limit(const ModelRealization& real, std::size_t k_T);
/// Prior expectation of theory_param_limit when rho is redrawn per replication.
[[nodiscard]] double prior_expected_param_limit(const PriorSpec& prior, std::size_t k_T);
/// Prior expectation of theory_pred_limit.
[[nodiscard]] double prior_expected_pred_limit(const EigenvalueLaw& law, const PriorSpec& prior,
                                               std::size_t k_T);

struct TruncationRule {
  enum class Kind { fixed, power };

  Kind kind = Kind::fixed;
  std::size_t k = 5;   // fixed
  double alpha = 4.1;  // power: k_T = floor(T^(1/alpha)), alpha > 4

  [[nodiscard]] static TruncationRule fixed(std::size_t k);
  [[nodiscard]] static TruncationRule power(double alpha);
  /// "fixed:5" or "power:4.1".
  [[nodiscard]] static TruncationRule parse(const std::string& text);
  [[nodiscard]] std::string to_string() const;
  void validate() const;
};

[[nodiscard]] std::size_t truncation_order(std::size_t T, const TruncationRule& rule);

/// Estimates rho_hat for N independent stationary scalar AR(1) paths of length T.
[[nodiscard]] std::vector<double> scalar_ar1_estimates(double rho, double sigma2, std::size_t T,
                                                       std::size_t N, RandomStream& rng);

struct BartlettResult {
  double t_mse;   // T * mean((rho_hat - rho)^2)
  double target;  // 1 - rho^2
};

[[nodiscard]] BartlettResult bartlett_check(double rho, double sigma2, std::size_t T, std::size_t N,
                                            RandomStream& rng);

[[nodiscard]] double standard_normal_cdf(double x) noexcept;

/// sup_x |F_n(x) - F(x)| of the sample against `cdf`.
[[nodiscard]] double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sided Kolmogorov-Smirnov critical value 1.73 / sqrt(N) (0.5% level).
[[nodiscard]] double ks_critical_value_005(std::size_t N) noexcept;

struct NormalityResult {
  double ks_statistic;
  std::vector<double> z_scores;  // sqrt(T) (rho_hat - rho) / sqrt(1 - rho^2)
};

/// Requires N >= 100.
[[nodiscard]] NormalityResult normality_check(double rho, std::size_t T, std::size_t N,
                                              RandomStream& rng);

struct ErgodicEstimates {
  double c_hat;  // (1/n) sum_{i=1..n} X_{i-1,j}^2
  double d_hat;  // (1/(n-1)) sum_{i=1..n} X_{i-1,j} X_{i,j}
};

/// Needs 2 <= n <= T; j is 1-based.
[[nodiscard]] ErgodicEstimates ergodic_estimates(const Trajectory& traj, std::size_t j, std::size_t n);

}  // namespace arh1
