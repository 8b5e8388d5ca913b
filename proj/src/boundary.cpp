#include "alscan/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace alscan {

std::string_view to_string(BoundaryBranch branch) {
  switch (branch) {
    case BoundaryBranch::polynomial_log: return "polynomial_log";
    case BoundaryBranch::moderate: return "moderate";
    case BoundaryBranch::power: return "power";
    case BoundaryBranch::hetero_zero: return "hetero_zero";
    case BoundaryBranch::hetero_linear: return "hetero_linear";
    case BoundaryBranch::hetero_root: return "hetero_root";
  }
  return "unknown";
}

void BoundaryQuery::validate() const {
  if (!(n >= 2)) throw std::invalid_argument("boundary: N must be >= 2");
  if (!(beta > 0 && beta < 1)) {
    throw std::invalid_argument("boundary: beta must lie in (0, 1)");
  }
  if (!(zeta >= 0) || !std::isfinite(zeta)) {
    throw std::invalid_argument("boundary: zeta must be finite and >= 0");
  }
  if (!(tau >= 0) || !std::isfinite(tau)) {
    throw std::invalid_argument("boundary: tau must be finite and >= 0");
  }
}

double rho_star(double beta) {
  if (!(beta > 0.5 && beta < 1)) {
    throw std::invalid_argument("rho_star: beta must lie in (1/2, 1), got " +
                                std::to_string(beta));
  }
  if (beta <= 0.75) return beta - 0.5;
  const double root = 1.0 - std::sqrt(1.0 - beta);
  return root * root;
}

BoundaryValue b_aligned_branch(const BoundaryQuery& q) {
  q.validate();
  const double log_n = std::log(q.n);
  if (q.zeta <= 1.0 - 4.0 * q.beta / 3.0) {
    // log1p keeps precision when N^(2b-1+z) is tiny.
    const double x = std::exp((2.0 * q.beta - 1.0 + q.zeta) * log_n);
    return {std::sqrt(std::log1p(x)), BoundaryBranch::polynomial_log};
  }
  if (q.zeta <= 1.0 - q.beta) {
    const double v = (std::sqrt(1.0 - q.zeta) - std::sqrt(1.0 - q.zeta - q.beta)) *
                     std::sqrt(2.0 * log_n);
    return {v, BoundaryBranch::moderate};
  }
  return {std::exp(0.5 * (q.beta + q.zeta - 1.0) * log_n), BoundaryBranch::power};
}

double b_aligned(double n, double beta, double zeta) {
  return b_aligned_branch({n, beta, zeta, 0.0}).value;
}

BoundaryValue b_hetero_branch(const BoundaryQuery& q) {
  q.validate();
  if (q.tau == 0.0) return b_aligned_branch(q);
  if (!(q.zeta < 1.0 - q.beta)) {
    throw std::invalid_argument(
        "b_hetero: tau > 0 requires zeta < 1 - beta");
  }
  const double root_log_n = std::sqrt(std::log(q.n));
  const double gap = 1.0 - q.zeta - q.beta;  // > 0 by the check above
  if (q.zeta <= 1.0 - 2.0 * q.beta || q.tau >= q.beta / gap) {
    return {0.0, BoundaryBranch::hetero_zero};
  }
  // 4 beta / (3 - tau) diverges as tau -> 3; beyond that the linear branch
  // is empty and only the root branch applies.
  const double knot = q.tau < 3.0 ? 4.0 * q.beta / (3.0 - q.tau)
                                  : std::numeric_limits<double>::infinity();
  if (q.zeta <= 1.0 - knot) {
    return {std::sqrt((1.0 - q.tau) * (2.0 * q.beta + q.zeta - 1.0)) * root_log_n,
            BoundaryBranch::hetero_linear};
  }
  if (1.0 - std::min(2.0 * q.beta, knot) < q.zeta) {
    const double v = std::sqrt(2.0 * (1.0 - q.zeta)) -
                     std::sqrt(2.0 * (1.0 + q.tau) * gap);
    return {v * root_log_n, BoundaryBranch::hetero_root};
  }
  throw std::logic_error("b_hetero: no branch matched (beta=" +
                         std::to_string(q.beta) + ", zeta=" +
                         std::to_string(q.zeta) + ", tau=" +
                         std::to_string(q.tau) + ")");
}

double b_hetero(double n, double beta, double zeta, double tau) {
  return b_hetero_branch({n, beta, zeta, tau}).value;
}

namespace {
void check_scale(double n, std::size_t T, std::size_t ell) {
  if (!(n >= 2)) throw std::invalid_argument("zeta: N must be >= 2");
  if (ell < 1 || ell > T) {
    throw std::invalid_argument("zeta: need 1 <= ell <= T");
  }
}
}  // namespace

double zeta_of_scale(double n, std::size_t T, std::size_t ell) {
  check_scale(n, T, ell);
  const double ratio = static_cast<double>(T) / static_cast<double>(ell);
  return std::log1p(std::log(ratio)) / std::log(n);
}

double zeta_corollary2(double n, std::size_t T, std::size_t ell) {
  check_scale(n, T, ell);
  // s_{lT} = log(eT/l) = 1 + log(T/l)
  const double s =
      1.0 + std::log(static_cast<double>(T) / static_cast<double>(ell));
  return std::log(s) / std::log(n);
}

double b_single_sequence(double T, double ell) {
  if (!(ell >= 1 && ell <= T)) {
    throw std::invalid_argument("b_single_sequence: need 1 <= ell <= T");
  }
  return std::sqrt(2.0 * (1.0 + std::log(T / ell)));
}

double b_nonaligned(double n, double beta, double zeta) {
  if (!(n >= 2)) throw std::invalid_argument("b_nonaligned: N must be >= 2");
  if (!(beta > 0 && beta < 1)) {
    throw std::invalid_argument("b_nonaligned: beta must lie in (0, 1)");
  }
  if (!(zeta > 0 && zeta > 1.0 - 2.0 * beta)) {
    throw std::invalid_argument(
        "b_nonaligned: need zeta > max(0, 1 - 2 beta)");
  }
  const double arg = (zeta + beta) / (zeta + 1.0);
  return std::sqrt(2.0 * std::log(n) * (zeta + 1.0) * rho_star(arg));
}

double beta_for_fraction(double n, double fraction) {
  if (!(n >= 2)) throw std::invalid_argument("beta_for_fraction: N must be >= 2");
  if (!(fraction > 0 && fraction <= 1)) {
    throw std::invalid_argument("beta_for_fraction: fraction must lie in (0, 1]");
  }
  return -std::log(fraction) / std::log(n);
}

}  // namespace alscan
