#include "mixture_kernel.hpp"

#include <cmath>

namespace alscan::detail {

#if defined(ALSCAN_TARGET_CLONES)
__attribute__((target_clones("avx2", "default")))
#endif
void mixture_terms(const double* y, std::size_t n, double mu, double shift,
                   double keep, double pi, double limit, double* out) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    double x = mu * y[i] - shift;
    x = x < limit ? x : limit;
    out[i] = keep + pi * std::exp(x);
  }
}

}  // namespace alscan::detail
