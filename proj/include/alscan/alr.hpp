#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "alscan/core.hpp"
#include "alscan/gof.hpp"
#include "alscan/scanset.hpp"

namespace alscan {

struct AlrConfig {
  /// Gauss-Legendre nodes per continuity piece of beta -> b_N(beta, zeta).
  std::size_t quadrature_nodes = 64;
  /// Products over sequences and sums over windows are always accumulated
  /// as sums of logarithms.
  static constexpr bool log_domain = true;
  std::optional<double> threshold;  // default: alr_default_threshold(N)
  unsigned workers = 1;
  bool keep_records = true;

  /// Throws std::invalid_argument if quadrature_nodes < 8.
  void validate() const;
};

/// Simple likelihood ratio 1 - pi + pi exp(mu y - mu^2 / 2).
double likelihood_ratio_term(double y, double pi, double mu);
/// log of likelihood_ratio_term, finite for every finite y.
double log_likelihood_ratio_term(double y, double pi, double mu);

/// log prod_n L_{nlj}(beta) with pi = N^-beta and mu = b_N(beta, zeta_{l,NT}).
/// `n` is the N that enters pi and mu; it need not equal scores.size().
double log_interval_likelihood(std::span<const double> scores, double beta,
                               std::size_t n, std::size_t T, std::size_t ell);

/// Integrates prod_n L_{nlj}(beta) over beta in (0, 1) for windows of one
/// length. Nodes, fractions and boundary means are precomputed once.
class BetaIntegrator {
 public:
  BetaIntegrator(std::size_t n, std::size_t T, std::size_t ell,
                 std::size_t nodes_per_piece);

  double zeta() const noexcept { return zeta_; }
  const std::vector<double>& betas() const noexcept { return betas_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// log prod_n L_{nlj}(beta_k) at node k.
  double log_product(std::span<const double> scores, std::size_t k) const;

  /// log of the integral over beta. Throws NumericError (naming the
  /// offending beta) when the integrand is not finite.
  double log_integral(std::span<const double> scores) const;

 private:
  double zeta_;
  std::vector<double> betas_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<double> fractions_;  // N^-beta
  std::vector<double> means_;      // b_N(beta, zeta)
};

/// max(20, log N). Markov's inequality bounds the null rejection rate by
/// 1 / threshold because E_0 A_NT <= 1.
double alr_default_threshold(std::size_t n);

/// log of the level weight 6 / (pi^2 r^3 e^(r+1)).
double log_alr_weight(int r);

/// Average likelihood ratio A_NT over every window of the set. Requires
/// N >= 2 (use alr_single_sequence for one sequence).
ScanReport alr_statistic(const PrefixSums& prefix, const ScanSet& set,
                         const AlrConfig& config = {});
ScanReport alr_statistic(const DataMatrix& data, const ScanSet& set,
                         const AlrConfig& config = {});

/// Sparse-mixture statistic A_N1 on one observation per sequence, evaluated
/// directly from its closed form. Returns log A_N1.
double log_alr_sparse_mixture(std::span<const double> x,
                              const AlrConfig& config = {});

/// Single-sequence statistic A_T with the sparsity exponent fixed at 0.
/// Returns log A_T.
double log_alr_single_sequence(std::span<const double> row, const ScanSet& set);

struct ProfilePoint {
  std::size_t j;
  double log_likelihood;
  double likelihood;  // exp(log_likelihood), may be inf
};

/// L_{lj} = integral over beta of prod_n L_{nlj}(beta) for every start
/// j = 0..T-l.
std::vector<ProfilePoint> likelihood_profile_over_j(const DataMatrix& data,
                                                    std::size_t ell,
                                                    const AlrConfig& config = {});

struct BetaProfilePoint {
  double beta;
  double log_likelihood;
  double fraction;  // N^-beta
};

/// L_{lj}(beta) = prod_n L_{nlj}(beta) on the supplied beta grid.
std::vector<BetaProfilePoint> likelihood_profile_over_beta(
    const DataMatrix& data, std::size_t ell, std::size_t j,
    std::span<const double> betas);

/// Index of the largest log-likelihood (first on ties).
std::size_t profile_argmax(std::span<const ProfilePoint> profile);
std::size_t profile_argmax(std::span<const BetaProfilePoint> profile);

}  // namespace alscan
