#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alscan/core.hpp"
#include "alscan/scanset.hpp"

namespace alscan {

inline constexpr double kInfeasible =
    -std::numeric_limits<double>::infinity();

/// s_{lT} = log(eT/l) = 1 + log(T/l).
double penalty_s(std::size_t ell, std::size_t T);

/// Binomial Kullback-Leibler kernel K(x, t); zero for x < t.
/// Throws std::invalid_argument unless 0 < t < 1 and 0 <= x <= 1.
double kl_berk_jones(double x, double t);

/// Q(x, t) = (x - t)^2 / (2 t (1 - t)).
double quadratic_q(double x, double t);

/// Penalty subtracted from HC_{Nlj}: sqrt(s log s).
double hc_penalty(double s);
/// Penalty subtracted from BJ_{Nlj}: s log s.
double bj_penalty(double s);

/// Default rejection threshold h_N = 2 log N for the penalized scans.
double lemma_threshold(std::size_t n);

enum class StatKind { phc, pbj, alr };

std::string to_string(StatKind kind);
StatKind parse_stat_kind(std::string_view text);

/// Statistic of one window together with its penalty.
///
/// raw is -inf when no order statistic satisfies the constraint set; arg_n is
/// then 0. For ALR reports raw holds log of the beta-integrated likelihood
/// and penalty the negative log weight of the window's level, so penalized is
/// the log of the window's contribution to A_NT.
struct IntervalStatistic {
  Interval interval;
  int level = 0;
  double raw = kInfeasible;
  double penalty = 0;
  double penalized = kInfeasible;
  std::size_t arg_n = 0;  // 1-based order-statistic index
};

/// HC_{Nlj} of an unsorted vector of interval p-values.
IntervalStatistic hc_interval(std::span<const double> pvals, std::size_t ell,
                              std::size_t T);
/// BJ_{Nlj} of an unsorted vector of interval p-values.
IntervalStatistic bj_interval(std::span<const double> pvals, std::size_t ell,
                              std::size_t T);

/// Same as the functions above for p-values already sorted ascending.
/// Only the first floor(N/2) entries are read.
IntervalStatistic hc_sorted(std::span<const double> sorted, std::size_t n,
                            std::size_t ell, std::size_t T);
IntervalStatistic bj_sorted(std::span<const double> sorted, std::size_t n,
                            std::size_t ell, std::size_t T);

struct ScanReport {
  StatKind kind = StatKind::pbj;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Sidedness sided = Sidedness::one_sided;
  std::vector<IntervalStatistic> records;  // empty when not requested
  std::size_t intervals = 0;               // number of windows scanned
  /// max of penalized values (PHC/PBJ) or A_NT (ALR, may overflow to inf).
  double global_value = kInfeasible;
  /// log A_NT for ALR reports; equals global_value otherwise.
  double log_global_value = kInfeasible;
  std::optional<LeveledInterval> argmax;
  double threshold = 0;
  bool reject = false;
};

struct ScanOptions {
  Sidedness sided = Sidedness::one_sided;
  std::optional<double> threshold;  // default: lemma_threshold(N)
  unsigned workers = 1;
  bool keep_records = true;
};

/// Penalized HC or BJ scan over every window of the set.
/// Throws std::invalid_argument on a T mismatch or kind == alr.
ScanReport penalized_scan(const PrefixSums& prefix, const ScanSet& set,
                          StatKind kind, const ScanOptions& options = {});
ScanReport penalized_scan(const DataMatrix& data, const ScanSet& set,
                          StatKind kind, const ScanOptions& options = {});

/// PHC and PBJ from one pass, sharing pooled scores and sorted p-values.
/// Returns {phc, pbj}.
std::pair<ScanReport, ScanReport> penalized_scans(const PrefixSums& prefix,
                                                  const ScanSet& set,
                                                  const ScanOptions& options = {});

}  // namespace alscan
