#include <cmath>
#include <fstream>
#include <numeric>

#include "arh1/errors.hpp"
#include "arh1/harness.hpp"
#include "arh1/random.hpp"
#include "arh1/simulator.hpp"

namespace arh1 {

using nlohmann::json;

namespace {

constexpr double kBartlettRelTol = 0.10;
constexpr double kErgodicCRelTol = 0.05;
constexpr double kErgodicRatioTol = 0.02;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void check_rho(double rho) { require(std::fabs(rho) < 1.0, "--rho must satisfy |rho| < 1"); }

DiagnosticReport bartlett(const DiagnosticParams& p, RandomStream& rng) {
  const double rho = p.rho.value_or(0.6);
  const double sigma2 = p.sigma2.value_or(1.0);
  const std::size_t T = p.T.value_or(4000);
  const std::size_t N = p.N.value_or(4000);
  check_rho(rho);
  require(sigma2 > 0.0, "--sigma2 must be positive");
  require(T >= 2 && N >= 1, "bartlett needs T >= 2 and N >= 1");
  const BartlettResult r = bartlett_check(rho, sigma2, T, N, rng);
  const double tol = kBartlettRelTol * r.target;
  const bool pass = std::fabs(r.t_mse - r.target) <= tol;
  return {DiagnosticKind::bartlett,
          {{"inputs", {{"rho", rho}, {"sigma2", sigma2}, {"T", T}, {"N", N}}},
           {"outputs", {{"t_mse", r.t_mse}}},
           {"targets", {{"one_minus_rho_sq", r.target}}},
           {"tolerance", {{"absolute", tol}, {"relative", kBartlettRelTol}}},
           {"pass", pass}},
          pass};
}

DiagnosticReport normality(const DiagnosticParams& p, RandomStream& rng) {
  const double rho = p.rho.value_or(0.5);
  const std::size_t T = p.T.value_or(3000);
  const std::size_t N = p.N.value_or(2000);
  check_rho(rho);
  require(T >= 2, "normality needs T >= 2");
  require(N >= 100, "normality needs N >= 100");
  const NormalityResult r = normality_check(rho, T, N, rng);
  const double crit = ks_critical_value_005(N);
  const double n = static_cast<double>(N);
  const double mean = std::accumulate(r.z_scores.begin(), r.z_scores.end(), 0.0) / n;
  double var = 0.0;
  for (double z : r.z_scores) var += (z - mean) * (z - mean);
  var /= n - 1.0;
  const bool pass = r.ks_statistic <= crit;
  return {DiagnosticKind::normality,
          {{"inputs", {{"rho", rho}, {"T", T}, {"N", N}}},
           {"outputs", {{"ks_statistic", r.ks_statistic}, {"z_mean", mean}, {"z_variance", var}}},
           {"targets", {{"ks_critical_value", crit}, {"level", 0.005}}},
           {"tolerance", {{"ks_max", crit}}},
           {"pass", pass}},
          pass};
}

DiagnosticReport ergodic(const DiagnosticParams& p, RandomStream& rng) {
  const double rho = p.rho.value_or(0.9);
  const double C = p.C.value_or(1.0);
  const std::size_t n = p.n.value_or(200000);
  check_rho(rho);
  require(C > 0.0, "--C must be positive");
  require(n >= 2, "ergodic needs n >= 2");
  const auto real = ModelRealization::from_coefficients({C}, {rho});
  const Trajectory traj = simulate(real, n, rng);
  const ErgodicEstimates e = ergodic_estimates(traj, 1, n);
  const double nn = static_cast<double>(n);
  const double ratio_target = rho * nn / (nn - 1.0);
  const double ratio = e.d_hat / e.c_hat;
  const bool pass = std::fabs(e.c_hat - C) <= kErgodicCRelTol * C &&
                    std::fabs(ratio - ratio_target) <= kErgodicRatioTol;
  return {DiagnosticKind::ergodic,
          {{"inputs", {{"rho", rho}, {"C", C}, {"n", n}}},
           {"outputs", {{"c_hat", e.c_hat}, {"d_hat", e.d_hat}, {"d_over_c", ratio}}},
           {"targets", {{"C", C}, {"D", rho * C}, {"d_over_c", ratio_target}}},
           {"tolerance", {{"c_relative", kErgodicCRelTol}, {"d_over_c_absolute", kErgodicRatioTol}}},
           {"pass", pass}},
          pass};
}

DiagnosticReport positivity(const DiagnosticParams& p, std::uint64_t seed) {
  const int example = p.example.value_or(1);
  const std::size_t T = p.T.value_or(500);
  const std::size_t N = p.N.value_or(100);
  const std::size_t kT = p.kT.value_or(5);
  require(T >= 2 && N >= 1 && kT >= 1, "positivity needs T >= 2, N >= 1, kT >= 1");
  SpectralModelSpec spec = SpectralModelSpec::example(example);
  spec.k_max = kT;

  std::size_t all_hold = 0;
  std::vector<std::size_t> per_component(kT, 0);
  for (std::size_t w = 1; w <= N; ++w) {
    RandomStream stream(derive_stream_key(seed, T, w));
    const ModelRealization real = realize(spec, stream);
    const Trajectory traj = simulate(real, T, stream, true);
    const auto diag = positivity_diagnostic(traj);
    bool every = true;
    for (std::size_t j = 0; j < kT; ++j) {
      if (diag[j].holds) ++per_component[j];
      every = every && diag[j].holds;
    }
    if (every) ++all_hold;
  }
  json fractions = json::array();
  for (std::size_t c : per_component) fractions.push_back(static_cast<double>(c) / static_cast<double>(N));
  return {DiagnosticKind::positivity,
          {{"inputs", {{"example", example}, {"T", T}, {"N", N}, {"kT", kT}}},
           {"outputs",
            {{"satisfied_fraction", static_cast<double>(all_hold) / static_cast<double>(N)},
             {"per_component_fraction", fractions}}},
           {"targets", nullptr},
           {"tolerance", nullptr},
           {"pass", nullptr},
           {"informational", true}},
          std::nullopt};
}

}  // namespace

std::string to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::bartlett: return "bartlett";
    case DiagnosticKind::normality: return "normality";
    case DiagnosticKind::ergodic: return "ergodic";
    case DiagnosticKind::positivity: return "positivity";
  }
  return "bartlett";
}

DiagnosticKind diagnostic_from_string(const std::string& name) {
  if (name == "bartlett") return DiagnosticKind::bartlett;
  if (name == "normality") return DiagnosticKind::normality;
  if (name == "ergodic") return DiagnosticKind::ergodic;
  if (name == "positivity") return DiagnosticKind::positivity;
  throw ValidationError("unknown diagnostic '" + name +
                        "' (expected bartlett, normality, ergodic or positivity)");
}

DiagnosticReport run_diagnostic(DiagnosticKind kind, const DiagnosticParams& params,
                                std::uint64_t seed) {
  RandomStream rng(derive_stream_key(seed, 0, 0));
  DiagnosticReport report = [&] {
    switch (kind) {
      case DiagnosticKind::bartlett: return bartlett(params, rng);
      case DiagnosticKind::normality: return normality(params, rng);
      case DiagnosticKind::ergodic: return ergodic(params, rng);
      case DiagnosticKind::positivity: return positivity(params, seed);
    }
    throw ValidationError("unknown diagnostic");
  }();
  report.record["kind"] = to_string(kind);
  report.record["seed"] = seed;
  return report;
}

DiagnosticReport run_diagnostics(DiagnosticKind kind, const DiagnosticParams& params,
                                 std::uint64_t seed, const std::filesystem::path& output_dir) {
  DiagnosticReport report = run_diagnostic(kind, params, seed);
  std::filesystem::create_directories(output_dir);
  const auto path = output_dir / ("diag_" + to_string(kind) + ".json");
  std::ofstream out(path, std::ios::trunc);
  out << report.record.dump(2) << '\n';
  if (!out) throw std::filesystem::filesystem_error("write failed", path,
                                                    std::make_error_code(std::errc::io_error));
  return report;
}

}  // namespace arh1
