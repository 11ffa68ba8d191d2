#include "arh1/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "arh1/errors.hpp"
#include "arh1/estimators.hpp"
#include "arh1/kernels.hpp"

namespace arh1 {

namespace {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double value) {
    const double y = value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void validate_input(const EfmseInput& input) {
  if (input.records.empty()) throw ValidationError("EFMSE needs at least one replication");
  const std::size_t k_T = input.records.front().estimates.size();
  if (k_T == 0) throw ValidationError("EFMSE records must carry at least one component");
  for (const auto& r : input.records) {
    if (r.estimates.size() != k_T || r.truth.size() != k_T) {
      throw ValidationError("EFMSE record length mismatch (estimates/truth vs k_T)");
    }
  }
}

template <typename Weight>
double efmse(const EfmseInput& input, Weight weight) {
  validate_input(input);
  KahanSum total;
  for (const auto& r : input.records) {
    double rep = 0.0;
    for (std::size_t j = 0; j < r.estimates.size(); ++j) {
      const double err = r.estimates[j] - r.truth[j];
      rep += err * err * weight(r, j);
    }
    total.add(rep);
  }
  return total.sum / static_cast<double>(input.records.size());
}

void check_components(std::size_t k_T, std::size_t available) {
  if (k_T == 0 || k_T > available) throw ValidationError("k_T must lie in 1..k_max");
}

}  // namespace

double efmse_param(const EfmseInput& input) {
  return efmse(input, [](const ReplicationRecord&, std::size_t) { return 1.0; });
}

double efmse_pred(const EfmseInput& input) {
  for (const auto& r : input.records) {
    if (r.xT.size() < r.estimates.size()) throw ValidationError("EFMSE record xT shorter than k_T");
  }
  return efmse(input, [](const ReplicationRecord& r, std::size_t j) { return r.xT[j] * r.xT[j]; });
}

double theory_param_limit(const ModelRealization& real, std::size_t k_T) {
  check_components(k_T, real.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < k_T; ++j) sum += 1.0 - real.rho[j] * real.rho[j];
  return sum;
}

double theory_pred_limit(const ModelRealization& real, std::size_t k_T) {
  check_components(k_T, real.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < k_T; ++j) sum += real.sigma2[j];
  return sum;
}

double prior_expected_param_limit(const PriorSpec& prior, std::size_t k_T) {
  double sum = 0.0;
  for (std::size_t k = 1; k <= k_T; ++k) sum += 1.0 - beta_second_moment(prior_params(prior, k));
  return sum;
}

double prior_expected_pred_limit(const EigenvalueLaw& law, const PriorSpec& prior, std::size_t k_T) {
  double sum = 0.0;
  for (std::size_t k = 1; k <= k_T; ++k) {
    sum += eigenvalue(law, k) * (1.0 - beta_second_moment(prior_params(prior, k)));
  }
  return sum;
}

TruncationRule TruncationRule::fixed(std::size_t k) {
  TruncationRule rule;
  rule.kind = Kind::fixed;
  rule.k = k;
  rule.validate();
  return rule;
}

TruncationRule TruncationRule::power(double alpha) {
  TruncationRule rule;
  rule.kind = Kind::power;
  rule.alpha = alpha;
  rule.validate();
  return rule;
}

TruncationRule TruncationRule::parse(const std::string& text) {
  const auto bad = [&] {
    return ValidationError("truncation rule must look like fixed:5 or power:4.1, got '" + text + "'");
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw bad();
  const std::string_view kind(text.data(), colon);
  const char* first = text.data() + colon + 1;
  const char* last = text.data() + text.size();
  if (kind == "fixed") {
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last) throw bad();
    return fixed(k);
  }
  if (kind == "power") {
    double alpha = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, alpha);
    if (ec != std::errc() || ptr != last) throw bad();
    return power(alpha);
  }
  throw bad();
}

std::string TruncationRule::to_string() const {
  if (kind == Kind::fixed) return "fixed:" + std::to_string(k);
  char buf[32];
  std::snprintf(buf, sizeof buf, "power:%g", alpha);
  return buf;
}

void TruncationRule::validate() const {
  if (kind == Kind::fixed) {
    if (k < 1) throw ValidationError("fixed truncation order must be >= 1");
    return;
  }
  if (!(alpha > 4.0) || !std::isfinite(alpha)) {
    throw ValidationError("power truncation needs alpha > 4 so that sqrt(T) C_{k_T} -> infinity");
  }
}

std::size_t truncation_order(std::size_t T, const TruncationRule& rule) {
  if (T < 1) throw ValidationError("truncation order needs T >= 1");
  rule.validate();
  if (rule.kind == TruncationRule::Kind::fixed) return rule.k;
  const double k = std::floor(std::pow(static_cast<double>(T), 1.0 / rule.alpha));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

std::vector<double> scalar_ar1_estimates(double rho, double sigma2, std::size_t T, std::size_t N,
                                         RandomStream& rng) {
  if (!(std::fabs(rho) < 1.0)) throw ValidationError("scalar AR(1) needs |rho| < 1");
  if (!(sigma2 > 0.0)) throw ValidationError("scalar AR(1) needs sigma2 > 0");
  if (T < 1) throw ValidationError("scalar AR(1) needs T >= 1");

  // Paths are simulated in batches, one path per lane of a multi-component run.
  constexpr std::size_t kBatch = 64;
  const double C = sigma2 / (1.0 - rho * rho);
  std::vector<double> out;
  out.reserve(N);
  for (std::size_t done = 0; done < N;) {
    const std::size_t width = std::min(kBatch, N - done);
    ModelRealization batch;
    batch.C.assign(width, C);
    batch.rho.assign(width, rho);
    batch.sigma2.assign(width, sigma2);
    RandomStream child = rng.split();
    const Trajectory traj = simulate(batch, T, child);
    for (const auto& s : sufficient_stats_all(traj, width)) out.push_back(classical_estimate(s));
    done += width;
  }
  return out;
}

BartlettResult bartlett_check(double rho, double sigma2, std::size_t T, std::size_t N,
                              RandomStream& rng) {
  if (N < 1) throw ValidationError("bartlett_check needs N >= 1");
  const auto estimates = scalar_ar1_estimates(rho, sigma2, T, N, rng);
  KahanSum sq;
  for (double e : estimates) sq.add((e - rho) * (e - rho));
  return {static_cast<double>(T) * sq.sum / static_cast<double>(N), 1.0 - rho * rho};
}

double standard_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("KS statistic needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value_005(std::size_t N) noexcept { return 1.73 / std::sqrt(static_cast<double>(N)); }

NormalityResult normality_check(double rho, std::size_t T, std::size_t N, RandomStream& rng) {
  if (N < 100) throw ValidationError("normality_check needs N >= 100");
  const auto estimates = scalar_ar1_estimates(rho, 1.0, T, N, rng);
  const double scale = std::sqrt(static_cast<double>(T)) / std::sqrt(1.0 - rho * rho);
  NormalityResult result;
  result.z_scores.reserve(N);
  for (double e : estimates) result.z_scores.push_back(scale * (e - rho));
  result.ks_statistic = ks_statistic(result.z_scores, standard_normal_cdf);
  return result;
}

ErgodicEstimates ergodic_estimates(const Trajectory& traj, std::size_t j, std::size_t n) {
  if (n < 2) throw ValidationError("ergodic averages need n >= 2");
  if (n > traj.T()) throw IndexError("ergodic horizon n=" + std::to_string(n) + " exceeds T");
  if (j == 0 || j > traj.k()) throw IndexError("component j=" + std::to_string(j) + " out of range");
  double alpha = 0.0;
  double beta = 0.0;
  kernels::lag_products(traj.coeffs().subspan(j - 1), n, traj.k(), std::span<double>(&alpha, 1),
                        std::span<double>(&beta, 1));
  return {beta / static_cast<double>(n), alpha / static_cast<double>(n - 1)};
}

}  // namespace arh1
