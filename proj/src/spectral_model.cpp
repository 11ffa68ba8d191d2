#include "arh1/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arh1/errors.hpp"

namespace arh1 {

EigenvalueLaw EigenvalueLaw::power_law(double s) {
  EigenvalueLaw law;
  law.kind = Kind::power_law;
  law.exponent = s;
  law.validate();
  return law;
}

EigenvalueLaw EigenvalueLaw::explicit_list(std::vector<double> values) {
  EigenvalueLaw law;
  law.kind = Kind::explicit_values;
  law.values = std::move(values);
  law.validate();
  return law;
}

void EigenvalueLaw::validate() const {
  if (kind == Kind::power_law) {
    if (!(exponent > 1.0) || !std::isfinite(exponent)) {
      throw ValidationError("power-law eigenvalue exponent must be > 1 (trace class), got " +
                            std::to_string(exponent));
    }
    return;
  }
  if (values.empty()) throw ValidationError("explicit eigenvalue list is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw ValidationError("explicit eigenvalue C_" + std::to_string(i + 1) +
                            " must be positive and finite");
    }
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw ValidationError("explicit eigenvalues must be strictly decreasing (at k=" +
                            std::to_string(i + 1) + ")");
    }
  }
}

double eigenvalue(const EigenvalueLaw& law, std::size_t k) {
  if (k == 0) throw IndexError("eigenvalue index k must be >= 1");
  if (law.kind == EigenvalueLaw::Kind::power_law) {
    return std::pow(static_cast<double>(k), -law.exponent);
  }
  if (k > law.values.size()) {
    throw IndexError("eigenvalue index k=" + std::to_string(k) + " exceeds explicit list of " +
                     std::to_string(law.values.size()));
  }
  return law.values[k - 1];
}

PriorSpec PriorSpec::explicit_params(std::vector<double> a, std::vector<double> b) {
  PriorSpec prior{std::move(a), std::move(b)};
  prior.validate();
  return prior;
}

void PriorSpec::validate() const {
  if (a.size() != b.size()) throw ValidationError("prior a and b sequences differ in length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string at = " at k=" + std::to_string(i + 1);
    if (!(a[i] > 0.0) || !std::isfinite(a[i])) throw ValidationError("prior a_k must be > 0" + at);
    if (!(b[i] > 1.0) || !std::isfinite(b[i])) throw ValidationError("prior b_k must be > 1" + at);
    if (!(a[i] + b[i] >= 2.0)) throw ValidationError("prior requires a_k + b_k >= 2" + at);
  }
}

BetaParams prior_params(const PriorSpec& prior, std::size_t k) {
  if (k == 0) throw IndexError("prior index k must be >= 1");
  if (prior.uses_default_rule()) {
    if (k > kMaxDefaultPriorIndex) {
      throw OverflowError("default prior a_k = 2^" + std::to_string(k) +
                          " is beyond the supported range (k <= 1020)");
    }
    return {std::ldexp(1.0, static_cast<int>(k)), kDefaultPriorB};
  }
  if (k > prior.a.size()) {
    throw IndexError("prior index k=" + std::to_string(k) + " exceeds explicit prior of " +
                     std::to_string(prior.a.size()));
  }
  return {prior.a[k - 1], prior.b[k - 1]};
}

double beta_mean(BetaParams p) noexcept { return p.a / (p.a + p.b); }

double beta_variance(BetaParams p) noexcept {
  const double s = p.a + p.b;
  return p.a * p.b / ((s + 1.0) * s * s);
}

double beta_second_moment(BetaParams p) noexcept {
  const double s = p.a + p.b;
  return p.a * (p.a + 1.0) / (s * (s + 1.0));
}

double kolmogorov_partial_sum(const PriorSpec& prior, std::size_t k_max) {
  double sum = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) sum += beta_variance(prior_params(prior, k));
  return sum;
}

double draw_rho(const PriorSpec& prior, std::size_t k, RandomStream& rng) {
  const BetaParams p = prior_params(prior, k);
  return std::clamp(rng.beta(p.a, p.b), kRhoClampEpsilon, 1.0 - kRhoClampEpsilon);
}

void SpectralModelSpec::validate() const {
  if (k_max < 1) throw ValidationError("k_max must be >= 1");
  law.validate();
  prior.validate();
  if (law.kind == EigenvalueLaw::Kind::explicit_values && law.values.size() < k_max) {
    throw ValidationError("explicit eigenvalue list shorter than k_max");
  }
  if (!prior.uses_default_rule() && prior.a.size() < k_max) {
    throw ValidationError("explicit prior shorter than k_max");
  }
  if (prior.uses_default_rule() && k_max > kMaxDefaultPriorIndex) {
    throw OverflowError("k_max exceeds the default prior's representable range");
  }
  if (rho_mode == RhoMode::explicit_values) {
    if (rho_values.size() < k_max) throw ValidationError("explicit rho list shorter than k_max");
    for (std::size_t i = 0; i < k_max; ++i) {
      if (!(rho_values[i] >= 0.0 && rho_values[i] < 1.0)) {
        throw ValidationError("explicit rho_" + std::to_string(i + 1) + " must lie in [0, 1)");
      }
    }
  }
}

SpectralModelSpec SpectralModelSpec::example(int id) {
  SpectralModelSpec spec;
  switch (id) {
    case 1: spec.law = EigenvalueLaw::power_law(1.5); break;
    case 2: spec.law = EigenvalueLaw::power_law(1.1); break;
    case 3: spec.law = EigenvalueLaw::power_law(2.0); break;
    default: throw ValidationError("unknown example id " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
  return spec;
}

ModelRealization ModelRealization::from_coefficients(std::vector<double> C, std::vector<double> rho) {
  if (C.size() != rho.size()) throw ValidationError("C and rho lengths differ");
  if (C.empty()) throw ValidationError("realization needs at least one component");
  ModelRealization real;
  real.sigma2.resize(C.size());
  for (std::size_t i = 0; i < C.size(); ++i) {
    if (!(C[i] > 0.0)) throw ValidationError("C_k must be positive");
    if (!(std::fabs(rho[i]) < 1.0)) throw ValidationError("|rho_k| must be < 1");
    real.sigma2[i] = C[i] * (1.0 - rho[i] * rho[i]);
  }
  real.C = std::move(C);
  real.rho = std::move(rho);
  return real;
}

ModelRealization ModelRealization::truncated(std::size_t k) const {
  if (k > size()) throw IndexError("cannot truncate realization to more components than it has");
  ModelRealization out;
  out.C.assign(C.begin(), C.begin() + static_cast<std::ptrdiff_t>(k));
  out.rho.assign(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(k));
  out.sigma2.assign(sigma2.begin(), sigma2.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

ModelRealization realize(const SpectralModelSpec& spec, RandomStream& rng) {
  spec.validate();
  std::vector<double> C(spec.k_max);
  std::vector<double> rho(spec.k_max);
  for (std::size_t k = 1; k <= spec.k_max; ++k) {
    C[k - 1] = eigenvalue(spec.law, k);
    rho[k - 1] = spec.rho_mode == RhoMode::explicit_values ? spec.rho_values[k - 1]
                                                           : draw_rho(spec.prior, k, rng);
  }
  return ModelRealization::from_coefficients(std::move(C), std::move(rho));
}

A2bReport check_a2b(const ModelRealization& real, double gamma) {
  const std::size_t n = real.size();
  if (n < 3) throw ValidationError("check_a2b needs at least 3 components");
  A2bReport report;
  report.required_slope = -(1.0 + gamma);

  double mean_x = 0.0;
  double mean_y = 0.0;
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = real.sigma2[i] / real.C[i];
    report.max_ratio = std::max(report.max_ratio, ratio);
    xs[i] = std::log(static_cast<double>(i + 1));
    ys[i] = std::log(ratio);
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
  }
  report.slope = sxy / sxx;
  report.ratio_bounded = report.max_ratio <= 1.0;
  report.decay_ok = report.slope <= report.required_slope + kA2bSlopeTolerance;
  return report;
}

}  // namespace arh1
