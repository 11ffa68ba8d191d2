#pragma once

#include <cstddef>

namespace arh1::kernels::detail {

void ar1_advance_scalar(const double* rho, const double* prev, const double* innov, double* out,
                        std::size_t k);
void lag_products_scalar(const double* rows, std::size_t T, std::size_t stride, std::size_t k,
                         double* alpha, double* beta);

#if defined(ARH1_HAVE_AVX2)
void ar1_advance_avx2(const double* rho, const double* prev, const double* innov, double* out,
                      std::size_t k);
void lag_products_avx2(const double* rows, std::size_t T, std::size_t stride, std::size_t k,
                       double* alpha, double* beta);
#endif

#if defined(ARH1_HAVE_NEON)
void ar1_advance_neon(const double* rho, const double* prev, const double* innov, double* out,
                      std::size_t k);
void lag_products_neon(const double* rows, std::size_t T, std::size_t stride, std::size_t k,
                       double* alpha, double* beta);
#endif

// Lane-wise Kahan step shared by the scalar paths and SIMD tails.
inline void kahan_add(double& sum, double& comp, double value) {
  const double y = value - comp;
  const double t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

}  // namespace arh1::kernels::detail
