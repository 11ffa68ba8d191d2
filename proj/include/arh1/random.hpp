#pragma once

#include <cstdint>
#include <random>

namespace arh1 {

/// SplitMix64 finalizer; used to derive independent stream keys.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Key for replication `replication` at sample size `T` under master `seed`.
/// key = mix64(mix64(mix64(seed) ^ T) ^ replication). Replications are
/// numbered from 1; (T = 0, replication = 0) is reserved for model draws.
[[nodiscard]] constexpr std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t T,
                                                        std::uint64_t replication) noexcept {
  return mix64(mix64(mix64(seed) ^ T) ^ replication);
}

/// Random stream with fixed, platform-independent variate algorithms.
///
/// Engine: std::mt19937_64 (bit-exact by the standard). Variates do not use
/// the <random> distributions, whose algorithms are implementation-defined:
///   - uniform: top 53 bits of one engine output, mapped to (0, 1);
///   - normal:  inverse CDF (Wichura AS241, PPND16) of one uniform;
///   - gamma:   Marsaglia-Tsang squeeze, with the u^(1/a) boost for a < 1;
///   - beta:    G_a / (G_a + G_b).
/// Algorithm set version: 1.
class RandomStream {
 public:
  static constexpr int kAlgorithmVersion = 1;

  explicit RandomStream(std::uint64_t key) : engine_(key) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double gamma(double shape);
  double beta(double a, double b);

  /// Derive a child stream; advances this stream by one draw.
  [[nodiscard]] RandomStream split();

 private:
  std::mt19937_64 engine_;
};

/// Standard normal quantile, |relative error| ~ 1e-16 (AS241 PPND16).
[[nodiscard]] double normal_quantile(double p);

}  // namespace arh1
