#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alscan {

/// Nodes and weights of a quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n);

/// Composite rule on [lo, hi]: one n-point Gauss-Legendre panel per piece
/// between consecutive breakpoints. Breakpoints outside (lo, hi) are ignored.
QuadratureRule composite_gauss_legendre(double lo, double hi,
                                        std::span<const double> breakpoints,
                                        std::size_t nodes_per_piece);

}  // namespace alscan
