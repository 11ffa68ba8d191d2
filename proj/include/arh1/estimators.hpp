#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "arh1/simulator.hpp"
#include "arh1/spectral_model.hpp"

namespace arh1 {

/// Lag-one sums of one component: alpha = sum x_{i-1} x_i, beta = sum x_{i-1}^2, i = 1..T.
struct SufficientStats {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t T = 0;
};

/// Compensated sums for component j (1-based). Throws PreconditionError if T = 0.
[[nodiscard]] SufficientStats sufficient_stats(const Trajectory& traj, std::size_t j);
/// Components 1..count in one pass over the trajectory.
[[nodiscard]] std::vector<SufficientStats> sufficient_stats_all(const Trajectory& traj,
                                                                std::size_t count);

/// alpha / beta. Throws DegenerateTrajectoryError when beta = 0.
[[nodiscard]] double classical_estimate(const SufficientStats& stats);

enum class Root { minus, plus };

/// Discriminant (alpha - beta)^2 - 4 beta sigma2 (2 - (a + b)).
[[nodiscard]] double bayes_discriminant(const SufficientStats& stats, double sigma2, double a,
                                        double b) noexcept;

/// Closed-form Beta-prior estimator
///   (1 / 2beta) [ (alpha + beta) -/+ sqrt(discriminant) ].
/// A slightly negative discriminant (rounding, |d| <= 1e-10 (alpha - beta + 1)^2) is
/// treated as zero; a genuinely negative one throws ComplexRootError.
[[nodiscard]] double bayes_estimate(const SufficientStats& stats, double sigma2, double a, double b,
                                    Root root = Root::minus);

/// Which score polynomial cubic_score_solve factors.
///   full:    (beta/s2) r^3 - ((alpha+beta)/s2) r^2 + (alpha/s2 - (a+b) + 2) r + (a - 1)
///            (stationarity of the log posterior; the prior's (a-1)/rho term kept)
///   reduced: the same without the constant (a - 1); its roots are exactly
///            {0} and the two closed-form roots of bayes_estimate.
/// They coincide when a = 1.
enum class ScoreForm { full, reduced };

struct CubicRoots {
  std::vector<double> all;  // every real root, ascending

  /// Roots inside [0, 1] (with a 1e-12 allowance at the ends).
  [[nodiscard]] std::vector<double> in_unit_interval() const;
  [[nodiscard]] bool contains(double value, double tol) const;
};

/// Real roots of the score cubic by bracketing between critical points and
/// TOMS 748 refinement. Throws DegenerateTrajectoryError when beta = 0.
[[nodiscard]] CubicRoots cubic_score_solve(const SufficientStats& stats, double sigma2, double a,
                                           double b, ScoreForm form = ScoreForm::reduced);

struct EstimateSet {
  std::size_t k_T = 0;
  std::vector<double> rho_hat;
  std::vector<double> rho_tilde_minus;
  std::optional<std::vector<double>> rho_tilde_plus;
  std::vector<SufficientStats> stats;
};

/// Classical and Bayes estimates for components 1..k_T, with sigma2_j taken
/// from the realization and (a_j, b_j) from the prior.
[[nodiscard]] EstimateSet estimate_all(const Trajectory& traj, const ModelRealization& real,
                                       std::size_t k_T, const PriorSpec& priors,
                                       bool with_plus_root = false);

enum class EstimatorKind { classical, bayes_minus };

/// Truncated plug-in forecast: out_j = estimate_j * xT_j for j <= k_T, zero above.
[[nodiscard]] std::vector<double> plugin_predict(const EstimateSet& est, EstimatorKind which,
                                                 std::span<const double> xT);

}  // namespace arh1
