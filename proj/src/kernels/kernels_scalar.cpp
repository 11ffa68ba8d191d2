#include <vector>

#include "kernels_impl.hpp"

namespace arh1::kernels::detail {

void ar1_advance_scalar(const double* rho, const double* prev, const double* innov, double* out,
                        std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) out[j] = rho[j] * prev[j] + innov[j];
}

void lag_products_scalar(const double* rows, std::size_t T, std::size_t stride, std::size_t k,
                         double* alpha, double* beta) {
  std::vector<double> comp_a(k, 0.0);
  std::vector<double> comp_b(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    alpha[j] = 0.0;
    beta[j] = 0.0;
  }
  for (std::size_t i = 1; i <= T; ++i) {
    const double* prev = rows + (i - 1) * stride;
    const double* cur = rows + i * stride;
    for (std::size_t j = 0; j < k; ++j) {
      kahan_add(alpha[j], comp_a[j], prev[j] * cur[j]);
      kahan_add(beta[j], comp_b[j], prev[j] * prev[j]);
    }
  }
}

}  // namespace arh1::kernels::detail
