#include "alscan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "alscan/alr.hpp"
#include "alscan/boundary.hpp"
#include "alscan/parallel.hpp"
#include "alscan/scanset.hpp"

namespace alscan {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream tags inside one replicate seed.
enum Stream : std::uint64_t { kNoise = 1, kCarrier = 2, kShift = 3, kPlacement = 4 };

// Replicate phases under a master seed.
enum Phase : std::uint64_t { kNull = 10, kAlternative = 11, kCalibration = 12, kPower = 13 };

}  // namespace

SplitMix64::result_type SplitMix64::operator()() noexcept {
  state_ += kGamma;
  return mix64(state_);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept {
  const std::uint64_t h = mix64(master + kGamma * (stream + 1));
  return mix64(h ^ mix64(index * 0xD1B54A32D192ED03ull + kGamma));
}

double SegmentSpec::fraction(std::size_t n) const {
  if (pi) return *pi;
  return std::pow(static_cast<double>(n), -(beta - epsilon));
}

double SegmentSpec::scale_exponent(std::size_t n, std::size_t T) const {
  if (zeta) return *zeta;
  return zeta_of_scale(static_cast<double>(n), T, interval.length);
}

double SegmentSpec::mean(std::size_t n, std::size_t T) const {
  if (mu) return *mu;
  return kappa.value_or(0.0) *
         b_hetero(static_cast<double>(n), beta, scale_exponent(n, T), tau);
}

void SignalModel::validate() const {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("SignalModel: N and T must be >= 1");
  }
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    const std::string where = "SignalModel segment " + std::to_string(k) + ": ";
    if (!s.interval.fits(cols)) {
      throw std::invalid_argument(where + "interval exceeds T");
    }
    for (std::size_t m = 0; m < k; ++m) {
      if (overlap_length(s.interval, segments[m].interval) > 0) {
        throw std::invalid_argument(where + "overlaps segment " + std::to_string(m));
      }
    }
    if (!(s.beta > 0.0 && s.beta < 1.0)) {
      throw std::invalid_argument(where + "beta must lie in (0, 1)");
    }
    if (!(s.tau >= 0.0)) throw std::invalid_argument(where + "tau must be >= 0");
    if (s.mu.has_value() == s.kappa.has_value()) {
      throw std::invalid_argument(where + "give exactly one of mu and kappa");
    }
    if (s.mu && !(*s.mu >= 0.0)) throw std::invalid_argument(where + "mu must be >= 0");
    if (s.kappa && !(*s.kappa >= 0.0)) {
      throw std::invalid_argument(where + "kappa must be >= 0");
    }
    if (s.zeta && !(*s.zeta >= 0.0)) {
      throw std::invalid_argument(where + "zeta must be >= 0");
    }
    if ((!s.pi || s.kappa || !s.zeta) && rows < 2) {
      throw std::invalid_argument(where + "derived pi, zeta or mu need N >= 2");
    }
    const double pi = s.fraction(rows);
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument(where + "carrier fraction " + std::to_string(pi) +
                                  " outside [0, 1]");
    }
    const double mu = s.mean(rows, cols);
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
      throw std::invalid_argument(where + "mean must be finite and >= 0");
    }
  }
}

Sample generate(const SignalModel& model, std::uint64_t seed) {
  model.validate();
  const std::size_t n = model.rows;
  const std::size_t T = model.cols;
  std::vector<double> values(n * T);
  {
    SplitMix64 rng(derive_seed(seed, kNoise, 0));
    std::normal_distribution<double> normal;
    for (double& v : values) v = normal(rng);
  }

  Truth truth;
  SplitMix64 carrier_rng(derive_seed(seed, kCarrier, 0));
  SplitMix64 shift_rng(derive_seed(seed, kShift, 0));
  for (const auto& seg : model.segments) {
    const double pi = seg.fraction(n);
    const double shift = seg.mean(n, T) / std::sqrt(static_cast<double>(seg.interval.length));
    std::bernoulli_distribution carrier(pi);
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r) {
      if (carrier(carrier_rng)) rows.push_back(r);
    }
    for (std::size_t r : rows) {
      double* row = values.data() + r * T;
      if (seg.tau > 0.0) {
        std::normal_distribution<double> u(shift, std::sqrt(seg.tau));
        for (std::size_t t = seg.interval.start; t < seg.interval.end(); ++t) {
          row[t] += u(shift_rng);
        }
      } else {
        for (std::size_t t = seg.interval.start; t < seg.interval.end(); ++t) {
          row[t] += shift;
        }
      }
    }
    truth.carriers.push_back(std::move(rows));
  }
  return {DataMatrix(n, T, std::move(values)), std::move(truth)};
}

Sample generate_nonaligned(std::size_t rows, std::size_t cols, std::size_t length,
                           double pi, double mu, std::uint64_t seed) {
  if (length < 1 || length > cols) {
    throw std::invalid_argument("generate_nonaligned: need 1 <= length <= T");
  }
  if (!(pi >= 0.0 && pi <= 1.0) || !(mu >= 0.0)) {
    throw std::invalid_argument("generate_nonaligned: need pi in [0, 1], mu >= 0");
  }
  Sample sample = generate(SignalModel::null(rows, cols), seed);
  std::vector<double> values(sample.data.values().begin(), sample.data.values().end());
  SplitMix64 carrier_rng(derive_seed(seed, kCarrier, 0));
  SplitMix64 place_rng(derive_seed(seed, kPlacement, 0));
  std::bernoulli_distribution carrier(pi);
  std::uniform_int_distribution<std::size_t> start(0, cols - length);
  const double shift = mu / std::sqrt(static_cast<double>(length));
  std::vector<std::size_t> carriers;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!carrier(carrier_rng)) continue;
    carriers.push_back(r);
    const std::size_t j = start(place_rng);
    for (std::size_t t = j; t < j + length; ++t) values[r * cols + t] += shift;
  }
  return {DataMatrix(rows, cols, std::move(values)), Truth{{std::move(carriers)}}};
}

std::size_t length_for_zeta(std::size_t n, std::size_t T, double target_zeta) {
  std::size_t best = T;
  double best_gap = std::abs(zeta_of_scale(static_cast<double>(n), T, T) - target_zeta);
  for (std::size_t ell = 1; ell < T; ++ell) {
    const double gap =
        std::abs(zeta_of_scale(static_cast<double>(n), T, ell) - target_zeta);
    if (gap < best_gap) {
      best_gap = gap;
      best = ell;
    }
  }
  return best;
}

double default_threshold(StatKind kind, std::size_t n) {
  return kind == StatKind::alr ? alr_default_threshold(n) : lemma_threshold(n);
}

double binomial_se(double rate, std::size_t reps) {
  if (reps == 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

double MonteCarloSummary::error_sum_se() const {
  return std::hypot(type1_se, type2_se);
}

namespace {

struct Decision {
  double value;
  bool reject;
};

// Evaluates every requested statistic on one data set.
std::vector<Decision> evaluate(const DataMatrix& data, const ScanSet& set,
                               std::span<const StatisticThreshold> stats,
                               const MonteCarloOptions& options) {
  const PrefixSums prefix(data);
  std::vector<Decision> out(stats.size());
  const bool want_phc = std::any_of(stats.begin(), stats.end(),
                                    [](auto& s) { return s.kind == StatKind::phc; });
  const bool want_pbj = std::any_of(stats.begin(), stats.end(),
                                    [](auto& s) { return s.kind == StatKind::pbj; });
  std::optional<std::pair<ScanReport, ScanReport>> scans;
  if (want_phc || want_pbj) {
    ScanOptions so;
    so.sided = options.sided;
    so.keep_records = false;
    scans = penalized_scans(prefix, set, so);
  }
  std::optional<ScanReport> alr;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    if (s.kind == StatKind::alr) {
      if (!alr) {
        AlrConfig cfg;
        cfg.quadrature_nodes = options.quadrature_nodes;
        cfg.keep_records = false;
        alr = alr_statistic(prefix, set, cfg);
      }
      const double level = s.threshold > 0 ? std::log(s.threshold)
                                           : -std::numeric_limits<double>::infinity();
      out[i] = {alr->global_value, alr->log_global_value >= level};
    } else {
      const ScanReport& r = s.kind == StatKind::phc ? scans->first : scans->second;
      out[i] = {r.global_value, r.global_value >= s.threshold};
    }
  }
  return out;
}

}  // namespace

std::vector<MonteCarloSummary> estimate_errors(
    const SignalModel& alternative, std::span<const StatisticThreshold> stats,
    std::size_t reps, std::uint64_t seed, const MonteCarloOptions& options) {
  if (reps < 1) throw std::invalid_argument("estimate_errors: reps must be >= 1");
  alternative.validate();
  const SignalModel null_model = SignalModel::null(alternative.rows, alternative.cols);
  const ScanSet set = build_scan_set(alternative.cols);

  std::vector<MonteCarloSummary> out(stats.size());
  for (std::size_t s = 0; s < stats.size(); ++s) {
    auto& m = out[s];
    m.kind = stats[s].kind;
    m.threshold = stats[s].threshold;
    m.replicates = reps;
    m.master_seed = seed;
    m.h0_values.resize(reps);
    m.h1_values.resize(reps);
  }
  std::vector<std::uint64_t> h0_seeds(reps);
  std::vector<std::uint64_t> h1_seeds(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    h0_seeds[i] = derive_seed(seed, kNull, i);
    h1_seeds[i] = derive_seed(seed, kAlternative, i);
  }

  std::vector<std::vector<Decision>> h0(reps);
  std::vector<std::vector<Decision>> h1(reps);
  // 2 * reps independent work items: even = null, odd = alternative.
  parallel_for(2 * reps, options.workers, [&](std::size_t item) {
    const std::size_t i = item / 2;
    if (item % 2 == 0) {
      h0[i] = evaluate(generate(null_model, h0_seeds[i]).data, set, stats, options);
    } else {
      h1[i] = evaluate(generate(alternative, h1_seeds[i]).data, set, stats, options);
    }
  });

  for (std::size_t s = 0; s < stats.size(); ++s) {
    auto& m = out[s];
    std::size_t false_rejects = 0;
    std::size_t misses = 0;
    for (std::size_t i = 0; i < reps; ++i) {
      m.h0_values[i] = h0[i][s].value;
      m.h1_values[i] = h1[i][s].value;
      false_rejects += h0[i][s].reject ? 1 : 0;
      misses += h1[i][s].reject ? 0 : 1;
    }
    m.type1_rate = static_cast<double>(false_rejects) / static_cast<double>(reps);
    m.type2_rate = static_cast<double>(misses) / static_cast<double>(reps);
    m.type1_se = binomial_se(m.type1_rate, reps);
    m.type2_se = binomial_se(m.type2_rate, reps);
    m.h0_seeds = h0_seeds;
    m.h1_seeds = h1_seeds;
  }
  return out;
}

MonteCarloSummary estimate_errors(const SignalModel& alternative, StatKind kind,
                                  double threshold, std::size_t reps,
                                  std::uint64_t seed, const MonteCarloOptions& options) {
  const StatisticThreshold stat{kind, threshold};
  return estimate_errors(alternative, std::span(&stat, 1), reps, seed, options)
      .front();
}

double QuantileTable::quantile(double level) const {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw std::invalid_argument("quantile: level must lie in [0, 1]");
  }
  if (null_values.empty()) throw std::logic_error("quantile: empty table");
  const double pos = std::ceil(level * static_cast<double>(null_values.size()));
  const std::size_t idx = pos < 1.0 ? 0 : static_cast<std::size_t>(pos) - 1;
  return null_values[std::min(idx, null_values.size() - 1)];
}

QuantileTable calibrate(std::size_t rows, std::size_t cols, StatKind kind,
                        std::size_t reps, std::span<const double> levels,
                        std::uint64_t seed, const MonteCarloOptions& options) {
  if (reps < 100) throw std::invalid_argument("calibrate: reps must be >= 100");
  const SignalModel null_model = SignalModel::null(rows, cols);
  null_model.validate();
  const ScanSet set = build_scan_set(cols);
  const StatisticThreshold stat{kind, 0.0};

  QuantileTable table;
  table.kind = kind;
  table.rows = rows;
  table.cols = cols;
  table.replicates = reps;
  table.seed = seed;
  table.null_values.resize(reps);
  parallel_for(reps, options.workers, [&](std::size_t i) {
    const auto data = generate(null_model, derive_seed(seed, kCalibration, i)).data;
    table.null_values[i] = evaluate(data, set, std::span(&stat, 1), options)[0].value;
  });
  std::sort(table.null_values.begin(), table.null_values.end());
  for (double level : levels) table.quantiles.push_back({level, table.quantile(level)});
  return table;
}

std::vector<PowerCell> power_study(const PowerConfig& config) {
  std::vector<PowerCell> cells;
  std::uint64_t cell_index = 0;
  for (std::size_t n : config.rows_grid) {
    SegmentSpec seg = config.segment;
    if (config.target_zeta) {
      const std::size_t ell = length_for_zeta(n, config.cols, *config.target_zeta);
      seg.interval = {(config.cols - ell) / 2, ell};
    }
    std::vector<StatisticThreshold> stats;
    for (StatKind k : config.kinds) {
      stats.push_back({k, config.threshold.value_or(default_threshold(k, n))});
    }
    for (double multiple : config.mu_multiples) {
      seg.mu.reset();
      seg.kappa = multiple;
      SignalModel model{n, config.cols, {seg}};
      auto summaries = estimate_errors(model, stats, config.reps,
                                       derive_seed(config.seed, kPower, cell_index++),
                                       config.options);
      cells.push_back({n, multiple, std::move(model), std::move(summaries)});
    }
  }
  return cells;
}

}  // namespace alscan
