#include "arh1/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "arh1/errors.hpp"
#include "arh1/kernels.hpp"

namespace arh1 {

namespace {

void require_energy(const SufficientStats& stats, std::size_t component = 0) {
  if (!(stats.beta > 0.0)) {
    throw DegenerateTrajectoryError(
        component == 0 ? std::string("degenerate component: beta = 0 (no lagged energy)")
                       : "degenerate component j=" + std::to_string(component) +
                             ": beta = 0 (no lagged energy)",
        component);
  }
}

void require_shapes(double sigma2, double a, double b) {
  if (!(sigma2 > 0.0)) throw ValidationError("sigma2 must be positive");
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("Beta prior shapes must be positive");
}

}  // namespace

SufficientStats sufficient_stats(const Trajectory& traj, std::size_t j) {
  if (j == 0 || j > traj.k()) throw IndexError("component j=" + std::to_string(j) + " out of range");
  if (traj.T() == 0) throw PreconditionError("sufficient statistics need T >= 1");
  // Strided column view: offset the matrix so column j is lane 0.
  const auto all = traj.coeffs().subspan(j - 1);
  double alpha = 0.0;
  double beta = 0.0;
  kernels::lag_products(all, traj.T(), traj.k(), std::span<double>(&alpha, 1),
                        std::span<double>(&beta, 1));
  return {alpha, beta, traj.T()};
}

std::vector<SufficientStats> sufficient_stats_all(const Trajectory& traj, std::size_t count) {
  if (count == 0 || count > traj.k()) throw IndexError("component count out of range");
  if (traj.T() == 0) throw PreconditionError("sufficient statistics need T >= 1");
  std::vector<double> alpha(count);
  std::vector<double> beta(count);
  kernels::lag_products(traj.coeffs(), traj.T(), traj.k(), alpha, beta);
  std::vector<SufficientStats> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = {alpha[j], beta[j], traj.T()};
  return out;
}

double classical_estimate(const SufficientStats& stats) {
  require_energy(stats);
  return stats.alpha / stats.beta;
}

double bayes_discriminant(const SufficientStats& stats, double sigma2, double a, double b) noexcept {
  const double diff = stats.alpha - stats.beta;
  return diff * diff - 4.0 * stats.beta * sigma2 * (2.0 - (a + b));
}

double bayes_estimate(const SufficientStats& stats, double sigma2, double a, double b, Root root) {
  require_energy(stats);
  require_shapes(sigma2, a, b);
  double disc = bayes_discriminant(stats, sigma2, a, b);
  if (disc < 0.0) {
    const double scale = std::fabs(stats.alpha - stats.beta) + 1.0;
    if (disc < -1e-10 * scale * scale) {
      throw ComplexRootError("Bayes estimator has no real root (a + b < 2); use cubic_score_solve");
    }
    return (stats.alpha + stats.beta) / (2.0 * stats.beta);  // double root
  }
  const double sq = std::sqrt(disc);
  const double sum = stats.alpha + stats.beta;
  // The root where sum and sqrt cancel comes from the product of the roots,
  // (alpha + sigma2 (2 - a - b)) / beta.
  const bool cancels = (root == Root::minus) == (sum >= 0.0);
  if (!cancels) return (root == Root::minus ? sum - sq : sum + sq) / (2.0 * stats.beta);
  const double far = sum >= 0.0 ? sum + sq : sum - sq;
  if (far == 0.0) return 0.0;
  return 2.0 * (stats.alpha + sigma2 * (2.0 - (a + b))) / far;
}

std::vector<double> CubicRoots::in_unit_interval() const {
  std::vector<double> out;
  for (double r : all) {
    if (r >= -1e-12 && r <= 1.0 + 1e-12) out.push_back(r);
  }
  return out;
}

bool CubicRoots::contains(double value, double tol) const {
  return std::any_of(all.begin(), all.end(), [&](double r) { return std::fabs(r - value) <= tol; });
}

CubicRoots cubic_score_solve(const SufficientStats& stats, double sigma2, double a, double b,
                             ScoreForm form) {
  require_energy(stats);
  require_shapes(sigma2, a, b);

  // Score polynomial scaled by sigma2: c3 r^3 + c2 r^2 + c1 r + c0.
  const double c3 = stats.beta;
  const double c2 = -(stats.alpha + stats.beta);
  const double c1 = stats.alpha - sigma2 * (a + b - 2.0);
  const double c0 = form == ScoreForm::full ? sigma2 * (a - 1.0) : 0.0;

  const auto p = [&](double r) { return ((c3 * r + c2) * r + c1) * r + c0; };
  const auto magnitude = [&](double r) {
    const double ar = std::fabs(r);
    return ((std::fabs(c3) * ar + std::fabs(c2)) * ar + std::fabs(c1)) * ar + std::fabs(c0);
  };

  // Cauchy bound: every real root lies in [-R, R].
  const double R = 1.0 + std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)}) / std::fabs(c3);

  std::vector<double> knots{-R};
  std::vector<double> critical;
  const double qa = 3.0 * c3;
  const double qb = 2.0 * c2;
  const double qdisc = qb * qb - 4.0 * qa * c1;
  if (qdisc > 0.0) {
    const double s = std::sqrt(qdisc);
    // Cancellation-free quadratic roots of p'.
    const double q = -0.5 * (qb + std::copysign(s, qb));
    double r1 = q / qa;
    double r2 = q != 0.0 ? c1 / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    critical = {r1, r2};
    knots.push_back(r1);
    knots.push_back(r2);
  } else if (qdisc == 0.0) {
    critical = {-qb / (2.0 * qa)};
  }
  knots.push_back(R);

  CubicRoots out;
  for (double x : knots) {
    if (p(x) == 0.0) out.all.push_back(x);
  }
  for (double x : critical) {
    // Tangential (double) roots do not change sign.
    if (std::fabs(p(x)) <= 1e-14 * magnitude(x)) out.all.push_back(x);
  }

  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double flo = p(lo);
    const double fhi = p(hi);
    if (!(flo * fhi < 0.0)) continue;
    std::uintmax_t max_iter = 200;
    const auto [left, right] = boost::math::tools::toms748_solve(p, lo, hi, flo, fhi, tol, max_iter);
    out.all.push_back(0.5 * (left + right));
  }

  std::sort(out.all.begin(), out.all.end());
  out.all.erase(std::unique(out.all.begin(), out.all.end(),
                            [](double x, double y) { return std::fabs(x - y) <= 1e-12 * (1.0 + std::fabs(x)); }),
                out.all.end());
  return out;
}

EstimateSet estimate_all(const Trajectory& traj, const ModelRealization& real, std::size_t k_T,
                         const PriorSpec& priors, bool with_plus_root) {
  if (k_T == 0 || k_T > traj.k()) throw ValidationError("k_T must lie in 1..traj.k()");
  if (k_T > real.size()) throw ValidationError("k_T exceeds the realization's components");

  EstimateSet est;
  est.k_T = k_T;
  est.stats = sufficient_stats_all(traj, k_T);
  est.rho_hat.resize(k_T);
  est.rho_tilde_minus.resize(k_T);
  if (with_plus_root) est.rho_tilde_plus.emplace(k_T);

  for (std::size_t j = 0; j < k_T; ++j) {
    const SufficientStats& s = est.stats[j];
    require_energy(s, j + 1);
    const BetaParams p = prior_params(priors, j + 1);
    est.rho_hat[j] = classical_estimate(s);
    est.rho_tilde_minus[j] = bayes_estimate(s, real.sigma2[j], p.a, p.b, Root::minus);
    if (with_plus_root) (*est.rho_tilde_plus)[j] = bayes_estimate(s, real.sigma2[j], p.a, p.b, Root::plus);
  }
  return est;
}

std::vector<double> plugin_predict(const EstimateSet& est, EstimatorKind which,
                                   std::span<const double> xT) {
  if (xT.size() < est.k_T) throw ValidationError("observation shorter than k_T");
  const auto& coef = which == EstimatorKind::classical ? est.rho_hat : est.rho_tilde_minus;
  std::vector<double> out(xT.size(), 0.0);
  for (std::size_t j = 0; j < est.k_T; ++j) out[j] = coef[j] * xT[j];
  return out;
}

}  // namespace arh1
