#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "arh1/random.hpp"
#include "arh1/spectral_model.hpp"

namespace arh1 {

/// Projected coefficients X_{n,j}, n = 0..T, j = 1..k, row-major by time:
/// element (n, j) lives at offset n * k + (j - 1).
class Trajectory {
 public:
  Trajectory(std::size_t T, std::size_t k, std::vector<double> coeffs,
             std::vector<double> innovations = {});

  [[nodiscard]] std::size_t T() const noexcept { return T_; }
  [[nodiscard]] std::size_t k() const noexcept { return k_; }

  /// X_{n,j}; j is 1-based.
  [[nodiscard]] double coeff(std::size_t n, std::size_t j) const;
  [[nodiscard]] std::span<const double> row(std::size_t n) const;
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] std::vector<double> column(std::size_t j) const;

  [[nodiscard]] bool has_innovations() const noexcept { return !innovations_.empty() || T_ == 0; }
  /// eps_j(n) for n = 1..T; j is 1-based.
  [[nodiscard]] double innovation(std::size_t n, std::size_t j) const;

 private:
  void check_component(std::size_t j) const;

  std::size_t T_;
  std::size_t k_;
  std::vector<double> coeffs_;       // (T+1) x k
  std::vector<double> innovations_;  // T x k, row n-1 holds eps(n)
};

/// Exact componentwise AR(1) recursion with stationary start:
///   X_{0,j} = sqrt(C_j) z,  X_{n,j} = rho_j X_{n-1,j} + eps_j(n),  eps_j(n) = sqrt(sigma2_j) z.
/// Normals are consumed row by row (all components of row 0, then of row 1, ...).
[[nodiscard]] Trajectory simulate(const ModelRealization& real, std::size_t T, RandomStream& rng,
                                  bool record_innovations = false);

/// Orthonormal system on [0, 1]; phi(j, t) with j >= 1.
struct OrthonormalBasis {
  std::function<double(std::size_t, double)> phi;

  /// 1, sqrt2 cos(2 pi t), sqrt2 sin(2 pi t), sqrt2 cos(4 pi t), ...
  [[nodiscard]] static OrthonormalBasis trigonometric();
};

/// X_n(t) = sum_j X_{n,j} phi_j(t) on each grid point.
[[nodiscard]] std::vector<double> render_curve(const Trajectory& traj, std::size_t row,
                                               const OrthonormalBasis& basis,
                                               std::span<const double> grid);

struct PositivityResult {
  double min_partial_sum;  // min over T' in 2..T of sum_{i<=T'} eps_j(i) X_{i-1,j}
  bool holds;              // min_partial_sum >= 0
};

/// Empirical positive-correlation condition between innovations and the
/// lagged process, one entry per component. Needs recorded innovations, T >= 2.
[[nodiscard]] std::vector<PositivityResult> positivity_diagnostic(const Trajectory& traj);

/// CSV with header `n,j,x`, j 1-based, one line per coefficient.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Binary layout, all little-endian:
///   bytes 0..7   magic "ARH1TRJ\0"
///   bytes 8..11  uint32 T
///   bytes 12..15 uint32 k
///   then (T+1) * k float64 coefficients, row-major by time.
void write_trajectory_binary(const Trajectory& traj, std::ostream& out);
[[nodiscard]] Trajectory read_trajectory_binary(std::istream& in);

}  // namespace arh1
