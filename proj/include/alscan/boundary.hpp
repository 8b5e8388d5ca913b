#pragma once

#include <cstddef>
#include <string_view>

namespace alscan {

/// Which closed-form branch produced a boundary value.
enum class BoundaryBranch {
  polynomial_log,   // sqrt(log(1 + N^(2b-1+z)))
  moderate,         // (sqrt(1-z) - sqrt(1-z-b)) sqrt(2 log N)
  power,            // sqrt(N^(b+z-1))
  hetero_zero,      // vanishing heteroscedastic boundary
  hetero_linear,    // sqrt((1-tau)(2b+z-1) log N)
  hetero_root,      // (sqrt(2(1-z)) - sqrt(2(1+tau)(1-z-b))) sqrt(log N)
};

std::string_view to_string(BoundaryBranch branch);

/// Parameters of a detection-boundary evaluation.
struct BoundaryQuery {
  double n = 2;       // number of sequences N >= 2
  double beta = 0.5;  // sparsity exponent, fraction pi = N^-beta
  double zeta = 0;    // scale exponent >= 0
  double tau = 0;     // extra signal variance >= 0

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

struct BoundaryValue {
  double value;
  BoundaryBranch branch;
};

/// Sparse-mixture boundary exponent rho*(beta) for 1/2 < beta < 1.
double rho_star(double beta);

/// Aligned-signal boundary b_N(beta, zeta); the query's tau is ignored.
BoundaryValue b_aligned_branch(const BoundaryQuery& query);
double b_aligned(double n, double beta, double zeta);

/// Heteroscedastic boundary b_N(beta, zeta, tau). tau = 0 reduces to
/// b_aligned; tau > 0 requires zeta < 1 - beta.
BoundaryValue b_hetero_branch(const BoundaryQuery& query);
double b_hetero(double n, double beta, double zeta, double tau);

/// zeta_{l,NT} = log(log(T/l) + 1) / log N.
double zeta_of_scale(double n, std::size_t T, std::size_t ell);

/// log(log(eT/l)) / log N. Algebraically identical to zeta_of_scale.
double zeta_corollary2(double n, std::size_t T, std::size_t ell);

/// Single-sequence boundary sqrt(2 log(eT/l)).
double b_single_sequence(double T, double ell);

/// Boundary for signals that are not aligned across sequences, valid for
/// zeta > max(0, 1 - 2 beta).
double b_nonaligned(double n, double beta, double zeta);

/// beta such that N^-beta equals the given fraction.
double beta_for_fraction(double n, double fraction);

}  // namespace alscan
