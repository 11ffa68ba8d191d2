#pragma once

#include <cstddef>
#include <vector>

#include "arh1/random.hpp"

namespace arh1 {

/// Eigenvalues C_k of the autocovariance operator, k = 1, 2, ...
struct EigenvalueLaw {
  enum class Kind { power_law, explicit_values };

  Kind kind = Kind::power_law;
  double exponent = 1.5;       // power_law: C_k = k^-exponent, exponent > 1
  std::vector<double> values;  // explicit_values: positive, strictly decreasing

  [[nodiscard]] static EigenvalueLaw power_law(double s);
  [[nodiscard]] static EigenvalueLaw explicit_list(std::vector<double> values);

  void validate() const;
};

/// C_k for k >= 1. Throws IndexError past the end of an explicit list.
[[nodiscard]] double eigenvalue(const EigenvalueLaw& law, std::size_t k);

struct BetaParams {
  double a;
  double b;
};

/// Beta(a_k, b_k) prior on each diagonal coefficient rho_k.
///
/// With empty sequences the default rule applies: a_k = 2^k, b_k = 1.01.
struct PriorSpec {
  std::vector<double> a;
  std::vector<double> b;

  [[nodiscard]] static PriorSpec default_rule() { return {}; }
  [[nodiscard]] static PriorSpec explicit_params(std::vector<double> a, std::vector<double> b);

  [[nodiscard]] bool uses_default_rule() const noexcept { return a.empty(); }
  void validate() const;
};

/// Largest k accepted by the default rule (a_k = 2^k must stay finite).
inline constexpr std::size_t kMaxDefaultPriorIndex = 1020;
inline constexpr double kDefaultPriorB = 1.0 + 1.0 / 100.0;

/// (a_k, b_k). Throws OverflowError when 2^k is beyond kMaxDefaultPriorIndex.
[[nodiscard]] BetaParams prior_params(const PriorSpec& prior, std::size_t k);

/// Prior mean a / (a + b).
[[nodiscard]] double beta_mean(BetaParams p) noexcept;
/// Prior variance a b / ((a + b + 1)(a + b)^2); also the Kolmogorov-extension summand.
[[nodiscard]] double beta_variance(BetaParams p) noexcept;
/// E{rho^2} = a (a + 1) / ((a + b)(a + b + 1)).
[[nodiscard]] double beta_second_moment(BetaParams p) noexcept;

/// sum_{k <= k_max} of beta_variance(prior_params(prior, k)).
[[nodiscard]] double kolmogorov_partial_sum(const PriorSpec& prior, std::size_t k_max);

/// Bounds of the open interval that drawn coefficients are clamped into.
inline constexpr double kRhoClampEpsilon = 1e-12;

/// One Beta(a_k, b_k) draw clamped to [eps, 1 - eps].
[[nodiscard]] double draw_rho(const PriorSpec& prior, std::size_t k, RandomStream& rng);

enum class RhoMode { redraw_per_replication, fixed_draw, explicit_values };

struct SpectralModelSpec {
  std::size_t k_max = 64;
  EigenvalueLaw law;
  PriorSpec prior;
  RhoMode rho_mode = RhoMode::redraw_per_replication;
  std::vector<double> rho_values;  // explicit_values only; length >= k_max

  void validate() const;

  /// Eigenvalue laws of the three reference examples (1: k^-3/2,
  /// 2: k^-(1+1/10), 3: k^-2) under the default prior.
  [[nodiscard]] static SpectralModelSpec example(int id);
};

/// Per-component triples (C_k, rho_k, sigma2_k) with sigma2_k = C_k (1 - rho_k^2).
struct ModelRealization {
  std::vector<double> C;
  std::vector<double> rho;
  std::vector<double> sigma2;

  [[nodiscard]] std::size_t size() const noexcept { return C.size(); }

  /// Builds sigma2 from C and rho; validates lengths and ranges.
  [[nodiscard]] static ModelRealization from_coefficients(std::vector<double> C,
                                                          std::vector<double> rho);
  /// First `k` components.
  [[nodiscard]] ModelRealization truncated(std::size_t k) const;
};

/// Materializes spec.k_max components. Redraw and fixed modes both draw
/// rho_1..rho_kmax from `rng` in order; the caller decides how often to call.
[[nodiscard]] ModelRealization realize(const SpectralModelSpec& spec, RandomStream& rng);

struct A2bReport {
  double max_ratio = 0.0;      // max_k sigma2_k / C_k
  bool ratio_bounded = false;  // max_ratio <= 1
  double slope = 0.0;          // least-squares slope of log(sigma2/C) on log k
  double required_slope = 0.0; // -(1 + gamma)
  bool decay_ok = false;       // slope <= required_slope + kA2bSlopeTolerance

  [[nodiscard]] bool pass() const noexcept { return ratio_bounded && decay_ok; }
};

inline constexpr double kDefaultA2bGamma = 0.1;
inline constexpr double kA2bSlopeTolerance = 0.2;

/// Summable-decay diagnostic for sigma2_k / C_k. Requires at least 3 components.
[[nodiscard]] A2bReport check_a2b(const ModelRealization& real, double gamma = kDefaultA2bGamma);

}  // namespace arh1
