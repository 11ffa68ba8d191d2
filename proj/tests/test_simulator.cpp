#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "arh1/errors.hpp"
#include "arh1/simulator.hpp"

namespace {

using namespace arh1;

double lag1_autocorrelation(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i > 0) num += (x[i] - mean) * (x[i - 1] - mean);
  }
  return num / den;
}

TEST(Simulate, StationaryStartVariance) {
  const auto real = ModelRealization::from_coefficients({1.0, 0.35, 0.19}, {0.5, 0.9, 0.99});
  std::vector<double> sq(3, 0.0);
  const int runs = 100000;
  for (int r = 0; r < runs; ++r) {
    RandomStream rng(derive_stream_key(1, 0, static_cast<std::uint64_t>(r) + 1));
    const auto traj = simulate(real, 0, rng);
    ASSERT_EQ(traj.T(), 0u);
    ASSERT_EQ(traj.row(0).size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) sq[j] += traj.row(0)[j] * traj.row(0)[j];
  }
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(sq[j] / runs / real.C[j], 1.0, 0.03) << j;
}

TEST(Simulate, WhiteNoiseHasNoLagCorrelation) {
  const auto real = ModelRealization::from_coefficients({1.0, 0.5}, {0.0, 0.0});
  RandomStream rng(8);
  const auto traj = simulate(real, 10000, rng);
  EXPECT_NEAR(lag1_autocorrelation(traj.column(1)), 0.0, 0.03);
  EXPECT_NEAR(lag1_autocorrelation(traj.column(2)), 0.0, 0.03);
}

TEST(Simulate, Ar1AutocorrelationMatchesIndependentGenerator) {
  const double rho = 0.8;
  const auto real = ModelRealization::from_coefficients({1.0}, {rho});
  RandomStream rng(12);
  const auto traj = simulate(real, 100000, rng);
  EXPECT_NEAR(lag1_autocorrelation(traj.column(1)), rho, 0.01);

  // Oracle: a plain scalar AR(1) generator on <random>.
  std::mt19937_64 gen(12);
  std::normal_distribution<double> z(0.0, std::sqrt(1.0 - rho * rho));
  std::vector<double> x(100001);
  x[0] = std::normal_distribution<double>()(gen);
  for (std::size_t n = 1; n < x.size(); ++n) x[n] = rho * x[n - 1] + z(gen);
  EXPECT_NEAR(lag1_autocorrelation(x), rho, 0.01);
}

TEST(Simulate, ReconstructionIdentityWithRecordedInnovations) {
  auto spec = SpectralModelSpec::example(1);
  spec.k_max = 6;
  RandomStream rng(21);
  const auto real = realize(spec, rng);
  const auto traj = simulate(real, 500, rng, true);
  ASSERT_TRUE(traj.has_innovations());
  for (std::size_t n = 1; n <= traj.T(); ++n) {
    for (std::size_t j = 1; j <= traj.k(); ++j) {
      const double rebuilt = real.rho[j - 1] * traj.coeff(n - 1, j) + traj.innovation(n, j);
      ASSERT_EQ(traj.coeff(n, j), rebuilt);
      ASSERT_TRUE(std::isfinite(traj.coeff(n, j)));
    }
  }
}

TEST(Simulate, DeterministicUnderConcurrency) {
  auto spec = SpectralModelSpec::example(1);
  spec.k_max = 5;
  RandomStream model_rng(3);
  const auto real = realize(spec, model_rng);
  RandomStream ref_rng(99);
  const auto reference = simulate(real, 2000, ref_rng);

  std::vector<std::vector<double>> results(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < results.size(); ++t) {
      pool.emplace_back([&, t] {
        RandomStream noise(t + 1000);
        (void)simulate(real, 1000 + t, noise);
        RandomStream rng(99);
        const auto traj = simulate(real, 2000, rng);
        results[t].assign(traj.coeffs().begin(), traj.coeffs().end());
      });
    }
  }
  for (const auto& r : results) {
    ASSERT_EQ(r.size(), reference.coeffs().size());
    ASSERT_EQ(std::memcmp(r.data(), reference.coeffs().data(), r.size() * sizeof(double)), 0);
  }
}

TEST(Simulate, ComponentsAreUncorrelatedAndStationary) {
  const auto real = ModelRealization::from_coefficients({1.0, 0.5}, {0.3, 0.6});
  const int reps = 10000;
  const std::size_t T = 20;
  double s01 = 0, s00 = 0, s11 = 0;
  for (int r = 0; r < reps; ++r) {
    RandomStream rng(derive_stream_key(4, T, static_cast<std::uint64_t>(r) + 1));
    const auto traj = simulate(real, T, rng);
    const auto last = traj.row(T);
    s01 += last[0] * last[1];
    s00 += last[0] * last[0];
    s11 += last[1] * last[1];
  }
  EXPECT_NEAR(s01 / std::sqrt(s00 * s11), 0.0, 0.05);
  // Var of the sample variance of N(0, C) is 2C^2 / reps; allow 4 sigma.
  EXPECT_NEAR(s00 / reps, 1.0, 4.0 * std::sqrt(2.0 / reps));
  EXPECT_NEAR(s11 / reps, 0.5, 4.0 * 0.5 * std::sqrt(2.0 / reps));
}

TEST(Simulate, MissingInnovationsAreReported) {
  const auto real = ModelRealization::from_coefficients({1.0}, {0.5});
  RandomStream rng(1);
  const auto traj = simulate(real, 10, rng);
  EXPECT_THROW((void)traj.innovation(1, 1), PreconditionError);
  EXPECT_THROW((void)positivity_diagnostic(traj), PreconditionError);
  EXPECT_THROW((void)traj.coeff(11, 1), IndexError);
  EXPECT_THROW((void)traj.coeff(0, 2), IndexError);
}

TEST(RenderCurve, BasisEvaluation) {
  const auto basis = OrthonormalBasis::trigonometric();
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.9};

  Trajectory unit(0, 3, {1.0, 0.0, 0.0});
  for (double v : render_curve(unit, 0, basis, grid)) EXPECT_EQ(v, 1.0);

  Trajectory zero(0, 3, {0.0, 0.0, 0.0});
  for (double v : render_curve(zero, 0, basis, grid)) EXPECT_EQ(v, 0.0);

  Trajectory second(0, 3, {0.0, 1.0, 0.0});
  const std::vector<double> origin = {0.0};
  EXPECT_NEAR(render_curve(second, 0, basis, origin)[0], std::numbers::sqrt2, 1e-15);

  EXPECT_THROW((void)render_curve(unit, 1, basis, grid), IndexError);
  EXPECT_THROW((void)render_curve(unit, 0, basis, std::vector<double>{}), ValidationError);
}

TEST(RenderCurve, TrigonometricBasisIsOrthonormal) {
  const auto basis = OrthonormalBasis::trigonometric();
  const int m = 4096;  // midpoint rule is exact for these trigonometric products
  for (std::size_t i = 1; i <= 5; ++i) {
    for (std::size_t j = 1; j <= 5; ++j) {
      double s = 0.0;
      for (int g = 0; g < m; ++g) {
        const double t = (g + 0.5) / m;
        s += basis.phi(i, t) * basis.phi(j, t);
      }
      EXPECT_NEAR(s / m, i == j ? 1.0 : 0.0, 1e-12) << i << "," << j;
    }
  }
}

TEST(Positivity, ZeroInnovationsHold) {
  Trajectory traj(3, 1, {1.0, 0.5, 0.25, 0.125}, {0.0, 0.0, 0.0});
  const auto diag = positivity_diagnostic(traj);
  ASSERT_EQ(diag.size(), 1u);
  EXPECT_EQ(diag[0].min_partial_sum, 0.0);
  EXPECT_TRUE(diag[0].holds);
}

TEST(Positivity, PositiveTermsHold) {
  const double rho = 0.4;
  Trajectory traj(2, 1, {1.0, rho + 1.0, rho * (rho + 1.0) + 1.0}, {1.0, 1.0});
  const auto diag = positivity_diagnostic(traj);
  EXPECT_TRUE(diag[0].holds);
  EXPECT_DOUBLE_EQ(diag[0].min_partial_sum, 1.0 + (rho + 1.0));
}

TEST(Positivity, NegativePartialSumFails) {
  Trajectory traj(2, 1, {1.0, -0.5, -0.25}, {-1.0, 0.0});
  EXPECT_FALSE(positivity_diagnostic(traj)[0].holds);
}

TEST(Positivity, SeededExampleOneFractionIsReported) {
  auto spec = SpectralModelSpec::example(1);
  spec.k_max = 5;
  int holds = 0;
  const int reps = 50;
  for (int w = 1; w <= reps; ++w) {
    RandomStream rng(derive_stream_key(7, 500, static_cast<std::uint64_t>(w)));
    const auto real = realize(spec, rng);
    const auto diag = positivity_diagnostic(simulate(real, 500, rng, true));
    bool all = true;
    for (const auto& d : diag) all = all && d.holds;
    holds += all ? 1 : 0;
  }
  const double fraction = static_cast<double>(holds) / reps;
  EXPECT_GE(fraction, 0.0);
  EXPECT_LE(fraction, 1.0);
  std::cout << "[info] positivity satisfied fraction: " << fraction << '\n';
}

TEST(Export, CsvHeaderAndRows) {
  Trajectory traj(1, 2, {1.0, 2.0, 3.0, 4.5});
  std::ostringstream out;
  write_trajectory_csv(traj, out);
  EXPECT_EQ(out.str(), "n,j,x\n0,1,1\n0,2,2\n1,1,3\n1,2,4.5\n");
}

TEST(Export, BinaryLayoutAndRoundTrip) {
  auto spec = SpectralModelSpec::example(2);
  spec.k_max = 3;
  RandomStream rng(5);
  const auto traj = simulate(realize(spec, rng), 40, rng);
  std::stringstream buf;
  write_trajectory_binary(traj, buf);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 16u + 41u * 3u * 8u);
  EXPECT_EQ(bytes.substr(0, 8), std::string("ARH1TRJ\0", 8));
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 40);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 3);
  const auto back = read_trajectory_binary(buf);
  EXPECT_EQ(back.T(), traj.T());
  EXPECT_EQ(back.k(), traj.k());
  EXPECT_TRUE(std::equal(back.coeffs().begin(), back.coeffs().end(), traj.coeffs().begin()));

  std::stringstream junk("not a trajectory file");
  EXPECT_THROW((void)read_trajectory_binary(junk), ValidationError);
}

}  // namespace
