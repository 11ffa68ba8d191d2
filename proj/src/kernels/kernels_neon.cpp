#include <arm_neon.h>

#include <vector>

#include "kernels_impl.hpp"

namespace arh1::kernels::detail {

namespace {

inline void kahan_add2(float64x2_t& sum, float64x2_t& comp, float64x2_t value) {
  const float64x2_t y = vsubq_f64(value, comp);
  const float64x2_t t = vaddq_f64(sum, y);
  comp = vsubq_f64(vsubq_f64(t, sum), y);
  sum = t;
}

}  // namespace

void ar1_advance_neon(const double* rho, const double* prev, const double* innov, double* out,
                      std::size_t k) {
  std::size_t j = 0;
  for (; j + 2 <= k; j += 2) {
    // vmulq + vaddq, not vfmaq: must round like the scalar reference.
    const float64x2_t prod = vmulq_f64(vld1q_f64(rho + j), vld1q_f64(prev + j));
    vst1q_f64(out + j, vaddq_f64(prod, vld1q_f64(innov + j)));
  }
  for (; j < k; ++j) out[j] = rho[j] * prev[j] + innov[j];
}

void lag_products_neon(const double* rows, std::size_t T, std::size_t stride, std::size_t k,
                       double* alpha, double* beta) {
  const std::size_t wide = k - k % 2;
  for (std::size_t j = 0; j < wide; j += 2) {
    float64x2_t sa = vdupq_n_f64(0.0);
    float64x2_t ca = vdupq_n_f64(0.0);
    float64x2_t sb = vdupq_n_f64(0.0);
    float64x2_t cb = vdupq_n_f64(0.0);
    float64x2_t prev = vld1q_f64(rows + j);
    for (std::size_t i = 1; i <= T; ++i) {
      const float64x2_t cur = vld1q_f64(rows + i * stride + j);
      kahan_add2(sa, ca, vmulq_f64(prev, cur));
      kahan_add2(sb, cb, vmulq_f64(prev, prev));
      prev = cur;
    }
    vst1q_f64(alpha + j, sa);
    vst1q_f64(beta + j, sb);
  }
  if (wide < k) {
    double comp_a = 0.0;
    double comp_b = 0.0;
    alpha[wide] = 0.0;
    beta[wide] = 0.0;
    for (std::size_t i = 1; i <= T; ++i) {
      const double p = rows[(i - 1) * stride + wide];
      const double c = rows[i * stride + wide];
      kahan_add(alpha[wide], comp_a, p * c);
      kahan_add(beta[wide], comp_b, p * p);
    }
  }
}

}  // namespace arh1::kernels::detail
