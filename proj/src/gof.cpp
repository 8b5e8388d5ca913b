#include "alscan/gof.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "alscan/parallel.hpp"

namespace alscan {

double penalty_s(std::size_t ell, std::size_t T) {
  if (ell < 1 || ell > T) {
    throw std::invalid_argument("penalty_s: need 1 <= ell <= T");
  }
  return 1.0 + std::log(static_cast<double>(T) / static_cast<double>(ell));
}

namespace {

void check_t(double t, const char* who) {
  if (!(t > 0.0 && t < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": t must lie in (0, 1)");
  }
}

// K(x, t) for x >= t, without argument checks.
double kl_upper(double x, double t) {
  if (x >= 1.0) return -std::log(t);
  return x * std::log(x / t) + (1.0 - x) * std::log((1.0 - x) / (1.0 - t));
}

void check_pvals(std::span<const double> pvals) {
  for (double p : pvals) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("p-values must lie in the open interval (0, 1)");
    }
  }
}

}  // namespace

double kl_berk_jones(double x, double t) {
  check_t(t, "kl_berk_jones");
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("kl_berk_jones: x must lie in [0, 1]");
  }
  if (x < t) return 0.0;
  return kl_upper(x, t);
}

double quadratic_q(double x, double t) {
  check_t(t, "quadratic_q");
  const double d = x - t;
  return d * d / (2.0 * t * (1.0 - t));
}

double hc_penalty(double s) { return std::sqrt(s * std::log(s)); }
double bj_penalty(double s) { return s * std::log(s); }

double lemma_threshold(std::size_t n) {
  return 2.0 * std::log(static_cast<double>(n));
}

std::string to_string(StatKind kind) {
  switch (kind) {
    case StatKind::phc: return "phc";
    case StatKind::pbj: return "pbj";
    case StatKind::alr: return "alr";
  }
  return "unknown";
}

StatKind parse_stat_kind(std::string_view text) {
  if (text == "phc" || text == "PHC") return StatKind::phc;
  if (text == "pbj" || text == "PBJ") return StatKind::pbj;
  if (text == "alr" || text == "ALR") return StatKind::alr;
  throw std::invalid_argument("unknown statistic '" + std::string(text) +
                              "' (expected phc|pbj|alr)");
}

IntervalStatistic hc_sorted(std::span<const double> sorted, std::size_t n,
                            std::size_t ell, std::size_t T) {
  IntervalStatistic out;
  out.interval = {0, ell};
  const double s = penalty_s(ell, T);
  const double nn = static_cast<double>(n);
  const double floor_p = s / nn;
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double p = sorted[i];
    if (p < floor_p) continue;
    const double v =
        (static_cast<double>(i + 1) / nn - p) / std::sqrt(p * (1.0 - p) / nn);
    if (v > out.raw) {
      out.raw = v;
      out.arg_n = i + 1;
    }
  }
  out.penalty = hc_penalty(s);
  out.penalized = out.raw - out.penalty;
  return out;
}

IntervalStatistic bj_sorted(std::span<const double> sorted, std::size_t n,
                            std::size_t ell, std::size_t T) {
  IntervalStatistic out;
  out.interval = {0, ell};
  const double s = penalty_s(ell, T);
  const double nn = static_cast<double>(n);
  const std::size_t half = n / 2;
  double best = kInfeasible;
  for (std::size_t i = 0; i < half; ++i) {
    const double p = sorted[i];
    const double x = static_cast<double>(i + 1) / nn;
    if (!(p < x)) continue;
    const double v = kl_upper(x, p);
    if (v > best) {
      best = v;
      out.arg_n = i + 1;
    }
  }
  out.raw = nn * best;
  out.penalty = bj_penalty(s);
  out.penalized = out.raw - out.penalty;
  return out;
}

IntervalStatistic hc_interval(std::span<const double> pvals, std::size_t ell,
                              std::size_t T) {
  check_pvals(pvals);
  std::vector<double> sorted(pvals.begin(), pvals.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return hc_sorted(sorted, sorted.size(), ell, T);
}

IntervalStatistic bj_interval(std::span<const double> pvals, std::size_t ell,
                              std::size_t T) {
  check_pvals(pvals);
  std::vector<double> sorted(pvals.begin(), pvals.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return bj_sorted(sorted, sorted.size(), ell, T);
}

namespace {

struct ScanScratch {
  std::vector<double> scores;
  std::vector<double> sorted_p;
};

// Fills scratch.sorted_p[0, floor(N/2)) with the smallest interval p-values in
// ascending order. p is non-increasing in the score key, so only the top half
// of the keys needs a tail evaluation.
void smallest_p_values(const PrefixSums& prefix, Interval iv, Sidedness sided,
                       ScanScratch& scratch) {
  pooled_scores_into(prefix, iv, scratch.scores);
  auto& keys = scratch.scores;
  if (sided == Sidedness::two_sided) {
    for (double& y : keys) y = std::abs(y);
  }
  const std::size_t half = keys.size() / 2;
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(half),
                    keys.end(), std::greater<>());
  for (std::size_t i = 0; i < half; ++i) {
    scratch.sorted_p[i] = p_value(keys[i], sided);
  }
}

void finish_report(ScanReport& report, const ScanSet& set,
                   std::span<const double> penalized) {
  report.global_value = kInfeasible;
  for (std::size_t i = 0; i < penalized.size(); ++i) {
    if (penalized[i] > report.global_value) {
      report.global_value = penalized[i];
      report.argmax = set.members()[i];
    }
  }
  report.log_global_value = report.global_value;
  report.reject = report.global_value >= report.threshold;
}

void check_shapes(const PrefixSums& prefix, const ScanSet& set) {
  if (prefix.cols() != set.length()) {
    throw std::invalid_argument("penalized_scan: data has T=" +
                                std::to_string(prefix.cols()) +
                                " but scan set has T=" +
                                std::to_string(set.length()));
  }
}

ScanReport empty_report(const PrefixSums& prefix, const ScanSet& set,
                        StatKind kind, const ScanOptions& options) {
  ScanReport report;
  report.kind = kind;
  report.rows = prefix.rows();
  report.cols = prefix.cols();
  report.sided = options.sided;
  report.intervals = set.size();
  report.threshold = options.threshold.value_or(lemma_threshold(prefix.rows()));
  return report;
}

}  // namespace

std::pair<ScanReport, ScanReport> penalized_scans(const PrefixSums& prefix,
                                                  const ScanSet& set,
                                                  const ScanOptions& options) {
  check_shapes(prefix, set);
  ScanReport phc = empty_report(prefix, set, StatKind::phc, options);
  ScanReport pbj = empty_report(prefix, set, StatKind::pbj, options);
  const auto& members = set.members();
  const std::size_t count = members.size();
  const std::size_t n = prefix.rows();
  const std::size_t T = prefix.cols();

  std::vector<IntervalStatistic> hc(count);
  std::vector<IntervalStatistic> bj(count);
  parallel_blocks(count, options.workers, [&](std::size_t lo, std::size_t hi) {
    ScanScratch scratch{std::vector<double>(n), std::vector<double>(n / 2 + 1)};
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& m = members[i];
      smallest_p_values(prefix, m.interval, options.sided, scratch);
      hc[i] = hc_sorted(scratch.sorted_p, n, m.interval.length, T);
      bj[i] = bj_sorted(scratch.sorted_p, n, m.interval.length, T);
      hc[i].interval = bj[i].interval = m.interval;
      hc[i].level = bj[i].level = m.level;
    }
  });

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = hc[i].penalized;
  finish_report(phc, set, values);
  for (std::size_t i = 0; i < count; ++i) values[i] = bj[i].penalized;
  finish_report(pbj, set, values);
  if (options.keep_records) {
    phc.records = std::move(hc);
    pbj.records = std::move(bj);
  }
  return {std::move(phc), std::move(pbj)};
}

ScanReport penalized_scan(const PrefixSums& prefix, const ScanSet& set,
                          StatKind kind, const ScanOptions& options) {
  if (kind == StatKind::alr) {
    throw std::invalid_argument("penalized_scan: kind must be phc or pbj");
  }
  check_shapes(prefix, set);
  ScanReport report = empty_report(prefix, set, kind, options);
  const auto& members = set.members();
  const std::size_t count = members.size();
  const std::size_t n = prefix.rows();
  const std::size_t T = prefix.cols();

  std::vector<IntervalStatistic> records(count);
  parallel_blocks(count, options.workers, [&](std::size_t lo, std::size_t hi) {
    ScanScratch scratch{std::vector<double>(n), std::vector<double>(n / 2 + 1)};
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& m = members[i];
      smallest_p_values(prefix, m.interval, options.sided, scratch);
      records[i] = kind == StatKind::phc
                       ? hc_sorted(scratch.sorted_p, n, m.interval.length, T)
                       : bj_sorted(scratch.sorted_p, n, m.interval.length, T);
      records[i].interval = m.interval;
      records[i].level = m.level;
    }
  });

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = records[i].penalized;
  finish_report(report, set, values);
  if (options.keep_records) report.records = std::move(records);
  return report;
}

ScanReport penalized_scan(const DataMatrix& data, const ScanSet& set,
                          StatKind kind, const ScanOptions& options) {
  return penalized_scan(PrefixSums(data), set, kind, options);
}

}  // namespace alscan
