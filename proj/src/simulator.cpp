#include "arh1/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "arh1/errors.hpp"
#include "arh1/kernels.hpp"

namespace arh1 {

Trajectory::Trajectory(std::size_t T, std::size_t k, std::vector<double> coeffs,
                       std::vector<double> innovations)
    : T_(T), k_(k), coeffs_(std::move(coeffs)), innovations_(std::move(innovations)) {
  if (k_ == 0) throw ValidationError("trajectory needs at least one component");
  if (coeffs_.size() != (T_ + 1) * k_) throw ValidationError("coefficient matrix has wrong size");
  if (!innovations_.empty() && innovations_.size() != T_ * k_) {
    throw ValidationError("innovation matrix has wrong size");
  }
}

void Trajectory::check_component(std::size_t j) const {
  if (j == 0 || j > k_) {
    throw IndexError("component j=" + std::to_string(j) + " outside 1.." + std::to_string(k_));
  }
}

double Trajectory::coeff(std::size_t n, std::size_t j) const {
  check_component(j);
  if (n > T_) throw IndexError("time index " + std::to_string(n) + " beyond T=" + std::to_string(T_));
  return coeffs_[n * k_ + (j - 1)];
}

std::span<const double> Trajectory::row(std::size_t n) const {
  if (n > T_) throw IndexError("time index " + std::to_string(n) + " beyond T=" + std::to_string(T_));
  return std::span<const double>(coeffs_).subspan(n * k_, k_);
}

std::vector<double> Trajectory::column(std::size_t j) const {
  check_component(j);
  std::vector<double> out(T_ + 1);
  for (std::size_t n = 0; n <= T_; ++n) out[n] = coeffs_[n * k_ + (j - 1)];
  return out;
}

double Trajectory::innovation(std::size_t n, std::size_t j) const {
  if (innovations_.empty()) throw PreconditionError("trajectory was simulated without innovations");
  check_component(j);
  if (n == 0 || n > T_) throw IndexError("innovation index must lie in 1..T");
  return innovations_[(n - 1) * k_ + (j - 1)];
}

Trajectory simulate(const ModelRealization& real, std::size_t T, RandomStream& rng,
                    bool record_innovations) {
  const std::size_t k = real.size();
  if (k == 0) throw ValidationError("cannot simulate an empty realization");

  std::vector<double> sd(k);
  for (std::size_t j = 0; j < k; ++j) sd[j] = std::sqrt(real.sigma2[j]);

  std::vector<double> coeffs((T + 1) * k);
  std::vector<double> recorded;
  if (record_innovations) recorded.resize(T * k);

  for (std::size_t j = 0; j < k; ++j) coeffs[j] = std::sqrt(real.C[j]) * rng.normal();

  std::vector<double> innov(k);
  const std::span<const double> rho(real.rho);
  for (std::size_t n = 1; n <= T; ++n) {
    for (std::size_t j = 0; j < k; ++j) innov[j] = sd[j] * rng.normal();
    const std::span<const double> prev(coeffs.data() + (n - 1) * k, k);
    const std::span<double> cur(coeffs.data() + n * k, k);
    kernels::ar1_advance(rho, prev, innov, cur);
    if (record_innovations) std::copy(innov.begin(), innov.end(), recorded.begin() + (n - 1) * k);
  }
  return Trajectory(T, k, std::move(coeffs), std::move(recorded));
}

OrthonormalBasis OrthonormalBasis::trigonometric() {
  return {[](std::size_t j, double t) {
    if (j <= 1) return 1.0;
    const double m = static_cast<double>(j / 2);
    const double arg = 2.0 * std::numbers::pi * m * t;
    return std::numbers::sqrt2 * (j % 2 == 0 ? std::cos(arg) : std::sin(arg));
  }};
}

std::vector<double> render_curve(const Trajectory& traj, std::size_t row,
                                 const OrthonormalBasis& basis, std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("render_curve needs a nonempty grid");
  const auto coeffs = traj.row(row);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double value = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] != 0.0) value += coeffs[j] * basis.phi(j + 1, grid[g]);
    }
    out[g] = value;
  }
  return out;
}

std::vector<PositivityResult> positivity_diagnostic(const Trajectory& traj) {
  if (traj.T() < 2) throw PreconditionError("positivity diagnostic needs T >= 2");
  if (!traj.has_innovations()) throw PreconditionError("positivity diagnostic needs recorded innovations");
  std::vector<PositivityResult> out;
  out.reserve(traj.k());
  for (std::size_t j = 1; j <= traj.k(); ++j) {
    double partial = traj.innovation(1, j) * traj.coeff(0, j);
    double min_partial = std::numeric_limits<double>::infinity();
    for (std::size_t i = 2; i <= traj.T(); ++i) {
      partial += traj.innovation(i, j) * traj.coeff(i - 1, j);
      min_partial = std::min(min_partial, partial);
    }
    out.push_back({min_partial, min_partial >= 0.0});
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "n,j,x\n";
  char buf[64];
  for (std::size_t n = 0; n <= traj.T(); ++n) {
    const auto row = traj.row(n);
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << n << ',' << (j + 1) << ',' << buf << '\n';
    }
  }
}

namespace {

constexpr std::array<char, 8> kTrajectoryMagic = {'A', 'R', 'H', '1', 'T', 'R', 'J', '\0'};

template <typename U>
U to_little_endian(U value) {
  if constexpr (std::endian::native == std::endian::big) {
    U swapped = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      swapped = static_cast<U>((swapped << 8) | ((value >> (8 * i)) & 0xff));
    }
    return swapped;
  }
  return value;
}

template <typename U>
void write_le(std::ostream& out, U value) {
  value = to_little_endian(value);
  char bytes[sizeof(U)];
  std::memcpy(bytes, &value, sizeof(U));
  out.write(bytes, sizeof(U));
}

template <typename U>
U read_le(std::istream& in) {
  char bytes[sizeof(U)];
  if (!in.read(bytes, sizeof(U))) throw ValidationError("truncated trajectory file");
  U value;
  std::memcpy(&value, bytes, sizeof(U));
  return to_little_endian(value);
}

}  // namespace

void write_trajectory_binary(const Trajectory& traj, std::ostream& out) {
  if (traj.T() > std::numeric_limits<std::uint32_t>::max() ||
      traj.k() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("trajectory too large for the binary format");
  }
  out.write(kTrajectoryMagic.data(), kTrajectoryMagic.size());
  write_le(out, static_cast<std::uint32_t>(traj.T()));
  write_le(out, static_cast<std::uint32_t>(traj.k()));
  for (double x : traj.coeffs()) write_le(out, std::bit_cast<std::uint64_t>(x));
}

Trajectory read_trajectory_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kTrajectoryMagic) {
    throw ValidationError("not an ARH1 trajectory file (bad magic)");
  }
  const auto T = read_le<std::uint32_t>(in);
  const auto k = read_le<std::uint32_t>(in);
  std::vector<double> coeffs((static_cast<std::size_t>(T) + 1) * k);
  for (double& x : coeffs) x = std::bit_cast<double>(read_le<std::uint64_t>(in));
  return Trajectory(T, k, std::move(coeffs));
}

}  // namespace arh1
