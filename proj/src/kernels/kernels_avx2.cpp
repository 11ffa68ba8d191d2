#include <immintrin.h>

#include <vector>

#include "kernels_impl.hpp"

namespace arh1::kernels::detail {

namespace {

inline void kahan_add4(__m256d& sum, __m256d& comp, __m256d value) {
  const __m256d y = _mm256_sub_pd(value, comp);
  const __m256d t = _mm256_add_pd(sum, y);
  comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
  sum = t;
}

}  // namespace

void ar1_advance_avx2(const double* rho, const double* prev, const double* innov, double* out,
                      std::size_t k) {
  std::size_t j = 0;
  for (; j + 4 <= k; j += 4) {
    const __m256d r = _mm256_loadu_pd(rho + j);
    const __m256d p = _mm256_loadu_pd(prev + j);
    const __m256d e = _mm256_loadu_pd(innov + j);
    _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_mul_pd(r, p), e));
  }
  for (; j < k; ++j) out[j] = rho[j] * prev[j] + innov[j];
}

void lag_products_avx2(const double* rows, std::size_t T, std::size_t stride, std::size_t k,
                       double* alpha, double* beta) {
  const std::size_t wide = k - k % 4;
  // Four-lane blocks, each swept over all time steps.
  for (std::size_t j = 0; j < wide; j += 4) {
    __m256d sa = _mm256_setzero_pd();
    __m256d ca = _mm256_setzero_pd();
    __m256d sb = _mm256_setzero_pd();
    __m256d cb = _mm256_setzero_pd();
    __m256d prev = _mm256_loadu_pd(rows + j);
    for (std::size_t i = 1; i <= T; ++i) {
      const __m256d cur = _mm256_loadu_pd(rows + i * stride + j);
      kahan_add4(sa, ca, _mm256_mul_pd(prev, cur));
      kahan_add4(sb, cb, _mm256_mul_pd(prev, prev));
      prev = cur;
    }
    _mm256_storeu_pd(alpha + j, sa);
    _mm256_storeu_pd(beta + j, sb);
  }
  if (wide < k) {
    const std::size_t rest = k - wide;
    std::vector<double> comp(2 * rest, 0.0);
    for (std::size_t j = wide; j < k; ++j) {
      alpha[j] = 0.0;
      beta[j] = 0.0;
    }
    for (std::size_t i = 1; i <= T; ++i) {
      const double* p = rows + (i - 1) * stride;
      const double* c = rows + i * stride;
      for (std::size_t j = wide; j < k; ++j) {
        kahan_add(alpha[j], comp[j - wide], p[j] * c[j]);
        kahan_add(beta[j], comp[rest + j - wide], p[j] * p[j]);
      }
    }
  }
}

}  // namespace arh1::kernels::detail
