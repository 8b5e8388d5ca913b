#include "alscan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace alscan {

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi's initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(double lo, double hi,
                                        std::span<const double> breakpoints,
                                        std::size_t nodes_per_piece) {
  if (!(hi > lo)) throw std::invalid_argument("composite_gauss_legendre: need lo < hi");
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const QuadratureRule base = gauss_legendre(nodes_per_piece);
  QuadratureRule out;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double half_width = 0.5 * (cuts[p + 1] - cuts[p]);
    const double mid = 0.5 * (cuts[p + 1] + cuts[p]);
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      out.nodes.push_back(mid + half_width * base.nodes[k]);
      out.weights.push_back(half_width * base.weights[k]);
    }
  }
  return out;
}

}  // namespace alscan
