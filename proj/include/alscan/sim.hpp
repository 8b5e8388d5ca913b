#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "alscan/core.hpp"
#include "alscan/gof.hpp"

namespace alscan {

/// Counter-based 64-bit generator (SplitMix64): output i is a bijective mix
/// of seed + (i + 1) * golden-gamma, so streams are cheap to derive and
/// independent of evaluation order elsewhere.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

 private:
  std::uint64_t state_;
};

/// Seed of stream `stream`, element `index`, under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept;

/// One signal segment of the alternative.
///
/// The carrier fraction is N^-(beta - epsilon) unless `pi` is given: positive
/// epsilon puts the fraction above the boundary, negative below. The mean is
/// either explicit (`mu`) or `kappa` times b_N(beta, zeta, tau). zeta is
/// derived from (T, length) unless given.
struct SegmentSpec {
  Interval interval;
  double beta = 0.5;
  double epsilon = 0.0;
  std::optional<double> pi;
  std::optional<double> zeta;
  std::optional<double> mu;
  std::optional<double> kappa;
  double tau = 0.0;

  double fraction(std::size_t n) const;
  double scale_exponent(std::size_t n, std::size_t T) const;
  double mean(std::size_t n, std::size_t T) const;
};

struct SignalModel {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<SegmentSpec> segments;

  static SignalModel null(std::size_t rows, std::size_t cols) {
    return {rows, cols, {}};
  }

  /// Throws std::invalid_argument unless segments fit, are pairwise disjoint
  /// and resolve to pi in [0, 1], mu >= 0, tau >= 0.
  void validate() const;
};

/// carriers[k] lists (ascending) the rows carrying segment k.
struct Truth {
  std::vector<std::vector<std::size_t>> carriers;
};

struct Sample {
  DataMatrix data;
  Truth truth;
};

/// Draws one data set. Noise, carrier indicators and heteroscedastic
/// shifts come from three separate streams of the seed, so a model without
/// carriers (or with zero shift) reproduces pure noise entry for entry.
Sample generate(const SignalModel& model, std::uint64_t seed);

/// Signals of a common length placed independently per row: each carrier
/// row gets its own uniformly drawn start. Used for demonstrations only.
Sample generate_nonaligned(std::size_t rows, std::size_t cols, std::size_t length,
                           double pi, double mu, std::uint64_t seed);

/// Length l in [1, T] whose zeta_{l,NT} is closest to the target.
std::size_t length_for_zeta(std::size_t n, std::size_t T, double target_zeta);

/// lemma_threshold for PHC/PBJ, alr_default_threshold for ALR.
double default_threshold(StatKind kind, std::size_t n);

struct MonteCarloOptions {
  Sidedness sided = Sidedness::one_sided;
  std::size_t quadrature_nodes = 64;
  unsigned workers = 1;
};

struct StatisticThreshold {
  StatKind kind;
  double threshold;
};

struct MonteCarloSummary {
  StatKind kind = StatKind::pbj;
  double threshold = 0;
  std::size_t replicates = 0;
  double type1_rate = 0;
  double type1_se = 0;
  double type2_rate = 0;
  double type2_se = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> h0_seeds;
  std::vector<std::uint64_t> h1_seeds;
  std::vector<double> h0_values;  // global statistic per replicate
  std::vector<double> h1_values;

  double error_sum() const { return type1_rate + type2_rate; }
  /// Standard error of error_sum (the two rates are independent).
  double error_sum_se() const;
};

/// Binomial standard error sqrt(p (1 - p) / reps).
double binomial_se(double rate, std::size_t reps);

/// Runs `reps` null and `reps` alternative replicates and reports rejection
/// rates for every requested statistic on the same replicates.
std::vector<MonteCarloSummary> estimate_errors(
    const SignalModel& alternative, std::span<const StatisticThreshold> stats,
    std::size_t reps, std::uint64_t seed, const MonteCarloOptions& options = {});

MonteCarloSummary estimate_errors(const SignalModel& alternative, StatKind kind,
                                  double threshold, std::size_t reps,
                                  std::uint64_t seed,
                                  const MonteCarloOptions& options = {});

struct QuantilePoint {
  double level;
  double value;
};

/// Empirical null distribution of one statistic.
struct QuantileTable {
  StatKind kind = StatKind::pbj;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> null_values;  // ascending
  std::vector<QuantilePoint> quantiles;

  /// Empirical quantile: the ceil(level * reps)-th smallest null value
  /// (level 0 gives the minimum, level 1 the maximum).
  double quantile(double level) const;
};

/// Null calibration with at least 100 replicates.
QuantileTable calibrate(std::size_t rows, std::size_t cols, StatKind kind,
                        std::size_t reps, std::span<const double> levels,
                        std::uint64_t seed, const MonteCarloOptions& options = {});

struct PowerCell {
  std::size_t rows;
  double mu_multiple;
  SignalModel model;
  std::vector<MonteCarloSummary> summaries;  // one per statistic
};

/// Error rates over a grid of sequence counts and boundary multiples. The
/// segment template's kappa is replaced by each multiple; when
/// `target_zeta` is set the segment length is re-chosen per N so that
/// zeta_{l,NT} is closest to it (the segment stays centred).
struct PowerConfig {
  std::size_t cols = 256;
  std::vector<std::size_t> rows_grid;
  std::vector<double> mu_multiples;
  SegmentSpec segment;
  std::optional<double> target_zeta;
  std::vector<StatKind> kinds{StatKind::phc, StatKind::pbj, StatKind::alr};
  std::optional<double> threshold;  // default per statistic
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  MonteCarloOptions options;
};

std::vector<PowerCell> power_study(const PowerConfig& config);

}  // namespace alscan
