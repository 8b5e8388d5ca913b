#pragma once

#include <cstddef>

namespace alscan::detail {

/// out[i] = keep + pi * exp(min(mu * y[i] - shift, limit)).
///
/// Compiled with vector math enabled; results may differ from the scalar
/// libm exp in the last bits.
void mixture_terms(const double* y, std::size_t n, double mu, double shift,
                   double keep, double pi, double limit, double* out);

}  // namespace alscan::detail
