#include <atomic>
#include <cstdlib>
#include <string>

#include "arh1/errors.hpp"
#include "arh1/kernels.hpp"
#include "kernels_impl.hpp"

namespace arh1::kernels {

namespace {

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("ARH1_KERNEL")) {
    const auto requested = parse_isa(env);
    if (requested && is_supported(*requested)) return *requested;
  }
  return detect_isa();
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ValidationError(std::string(what) + ": span length mismatch");
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  if (name == "auto") return detect_isa();
  return std::nullopt;
}

bool is_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(ARH1_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(ARH1_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() noexcept {
  if (is_supported(Isa::avx2)) return Isa::avx2;
  if (is_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!is_supported(isa)) {
    throw ValidationError("kernel ISA '" + std::string(to_string(isa)) +
                          "' is not supported on this machine/build");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

void ar1_advance(Isa isa, std::span<const double> rho, std::span<const double> prev,
                 std::span<const double> innov, std::span<double> out) {
  const std::size_t k = out.size();
  check_lengths(rho.size(), k, "ar1_advance");
  check_lengths(prev.size(), k, "ar1_advance");
  check_lengths(innov.size(), k, "ar1_advance");
  switch (isa) {
#if defined(ARH1_HAVE_AVX2)
    case Isa::avx2: detail::ar1_advance_avx2(rho.data(), prev.data(), innov.data(), out.data(), k); return;
#endif
#if defined(ARH1_HAVE_NEON)
    case Isa::neon: detail::ar1_advance_neon(rho.data(), prev.data(), innov.data(), out.data(), k); return;
#endif
    default: detail::ar1_advance_scalar(rho.data(), prev.data(), innov.data(), out.data(), k);
  }
}

void ar1_advance(std::span<const double> rho, std::span<const double> prev,
                 std::span<const double> innov, std::span<double> out) {
  ar1_advance(active_isa(), rho, prev, innov, out);
}

void lag_products(Isa isa, std::span<const double> rows, std::size_t T, std::size_t stride,
                  std::span<double> alpha, std::span<double> beta) {
  const std::size_t k = alpha.size();
  check_lengths(beta.size(), k, "lag_products");
  if (k > stride) throw ValidationError("lag_products: more columns than the row stride");
  if (k > 0 && rows.size() < T * stride + k) throw ValidationError("lag_products: matrix too short");
  switch (isa) {
#if defined(ARH1_HAVE_AVX2)
    case Isa::avx2: detail::lag_products_avx2(rows.data(), T, stride, k, alpha.data(), beta.data()); return;
#endif
#if defined(ARH1_HAVE_NEON)
    case Isa::neon: detail::lag_products_neon(rows.data(), T, stride, k, alpha.data(), beta.data()); return;
#endif
    default: detail::lag_products_scalar(rows.data(), T, stride, k, alpha.data(), beta.data());
  }
}

void lag_products(std::span<const double> rows, std::size_t T, std::size_t stride,
                  std::span<double> alpha, std::span<double> beta) {
  lag_products(active_isa(), rows, T, stride, alpha, beta);
}

}  // namespace arh1::kernels
