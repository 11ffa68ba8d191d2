#pragma once

// Data-parallel inner loops. Every kernel works lane-wise across components,
// so each lane performs exactly the scalar reference's operation sequence and
// the SIMD variants are bit-identical to it (no FMA contraction, no
// cross-lane reduction).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace arh1::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view to_string(Isa isa) noexcept;
[[nodiscard]] std::optional<Isa> parse_isa(std::string_view name) noexcept;

/// Whether the running CPU and this build both support `isa`.
[[nodiscard]] bool is_supported(Isa isa) noexcept;
/// Best supported ISA on this machine.
[[nodiscard]] Isa detect_isa() noexcept;

/// ISA used by the dispatching wrappers below. Defaults to detect_isa(), or
/// to the value of ARH1_KERNEL (scalar|avx2|neon|auto) when set and supported.
[[nodiscard]] Isa active_isa() noexcept;
/// Throws ValidationError when `isa` is not supported.
void set_active_isa(Isa isa);

/// out[j] = rho[j] * prev[j] + innov[j]
void ar1_advance(std::span<const double> rho, std::span<const double> prev,
                 std::span<const double> innov, std::span<double> out);
void ar1_advance(Isa isa, std::span<const double> rho, std::span<const double> prev,
                 std::span<const double> innov, std::span<double> out);

/// Compensated lag-one sums over a row-major (T+1) x stride matrix, first
/// alpha.size() columns:
///   alpha[j] = sum_{i=1..T} x(i-1, j) * x(i, j)
///   beta[j]  = sum_{i=1..T} x(i-1, j)^2
void lag_products(std::span<const double> rows, std::size_t T, std::size_t stride,
                  std::span<double> alpha, std::span<double> beta);
void lag_products(Isa isa, std::span<const double> rows, std::size_t T, std::size_t stride,
                  std::span<double> alpha, std::span<double> beta);

}  // namespace arh1::kernels
