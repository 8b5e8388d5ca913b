#include "alscan/alr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "alscan/boundary.hpp"
#include "alscan/parallel.hpp"
#include "alscan/quadrature.hpp"
#include "detail/mixture_kernel.hpp"

namespace alscan {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 - pi + pi e^x) for 0 <= pi <= 1. log1p loses relative accuracy
// once the mixture drops well below 1 (pi near 1, x very negative), so the
// direct sum takes over there.
inline double log_mixture(double x, double pi) {
  if (x >= 30.0) return x + std::log(pi + (1.0 - pi) * std::exp(-x));
  const double d = pi * std::expm1(x);
  if (d > -0.5) return std::log1p(d);
  return std::log((1.0 - pi) + pi * std::exp(x));
}

// Streaming log-sum-exp; the result depends only on the order of add().
class LogSumExp {
 public:
  void add(double v) {
    if (v == kNegInf) return;
    if (v > max_) {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    } else {
      sum_ += std::exp(v - max_);
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

std::vector<double> beta_knots(double zeta) {
  return {0.75 * (1.0 - zeta), 1.0 - zeta};
}

double reject_level(double threshold) {
  return threshold > 0 ? std::log(threshold) : kNegInf;
}

}  // namespace

void AlrConfig::validate() const {
  if (quadrature_nodes < 8) {
    throw std::invalid_argument("AlrConfig: quadrature_nodes must be >= 8");
  }
}

double likelihood_ratio_term(double y, double pi, double mu) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::invalid_argument("likelihood_ratio_term: pi must lie in [0, 1]");
  }
  const double x = mu * y - 0.5 * mu * mu;
  const double d = pi * std::expm1(x);
  return d > -0.5 ? 1.0 + d : (1.0 - pi) + pi * std::exp(x);
}

double log_likelihood_ratio_term(double y, double pi, double mu) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::invalid_argument(
        "log_likelihood_ratio_term: pi must lie in [0, 1]");
  }
  if (pi == 0.0 || mu == 0.0) return 0.0;
  return log_mixture(mu * y - 0.5 * mu * mu, pi);
}

double log_interval_likelihood(std::span<const double> scores, double beta,
                               std::size_t n, std::size_t T, std::size_t ell) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("log_interval_likelihood: beta must lie in (0, 1)");
  }
  const double nn = static_cast<double>(n);
  const double pi = std::pow(nn, -beta);
  const double mu = b_aligned(nn, beta, zeta_of_scale(nn, T, ell));
  double total = 0.0;
  for (double y : scores) total += log_likelihood_ratio_term(y, pi, mu);
  return total;
}

BetaIntegrator::BetaIntegrator(std::size_t n, std::size_t T, std::size_t ell,
                               std::size_t nodes_per_piece)
    : zeta_(zeta_of_scale(static_cast<double>(n), T, ell)) {
  const auto knots = beta_knots(zeta_);
  auto rule = composite_gauss_legendre(0.0, 1.0, knots, nodes_per_piece);
  betas_ = std::move(rule.nodes);
  weights_ = std::move(rule.weights);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < betas_.size(); ++k) {
    log_weights_.push_back(std::log(weights_[k]));
    fractions_.push_back(std::pow(nn, -betas_[k]));
    means_.push_back(b_aligned(nn, betas_[k], zeta_));
  }
}

double BetaIntegrator::log_product(std::span<const double> scores,
                                   std::size_t k) const {
  const double pi = fractions_[k];
  const double mu = means_[k];
  const double shift = 0.5 * mu * mu;
  if (pi == 0.0 || mu == 0.0) return 0.0;
  // Multiply terms directly and pull the binary exponent out every
  // kBlock terms; one exp per term instead of expm1 + log1p. Terms lie in
  // [1 - pi, 1e16] so a block cannot overflow or underflow; larger terms go
  // through the log path.
  constexpr std::size_t kBlock = 16;
  constexpr double kDirectLimit = 36.0;  // e^36 ~ 4e15
  thread_local std::vector<double> terms;
  terms.resize(scores.size());
  detail::mixture_terms(scores.data(), scores.size(), mu, shift, 1.0 - pi, pi,
                        kDirectLimit, terms.data());
  double logs = 0.0;
  double prod = 1.0;
  long exponent = 0;
  std::size_t i = 0;
  while (i < scores.size()) {
    const std::size_t stop = std::min(scores.size(), i + kBlock);
    for (; i < stop; ++i) {
      const double x = mu * scores[i] - shift;
      if (x < kDirectLimit) {
        prod *= terms[i];
      } else {
        logs += log_mixture(x, pi);
      }
    }
    int e = 0;
    prod = std::frexp(prod, &e);
    exponent += e;
  }
  return logs + std::log(prod) + static_cast<double>(exponent) * std::numbers::ln2;
}

double BetaIntegrator::log_integral(std::span<const double> scores) const {
  LogSumExp acc;
  for (std::size_t k = 0; k < betas_.size(); ++k) {
    const double g = log_product(scores, k);
    if (std::isnan(g) || g == std::numeric_limits<double>::infinity()) {
      std::ostringstream msg;
      msg << "non-finite ALR integrand at beta=" << betas_[k];
      throw NumericError(msg.str());
    }
    acc.add(log_weights_[k] + g);
  }
  return acc.value();
}

double alr_default_threshold(std::size_t n) {
  return std::max(20.0, std::log(static_cast<double>(n)));
}

double log_alr_weight(int r) {
  const double rr = static_cast<double>(r);
  return std::log(6.0 / (std::numbers::pi * std::numbers::pi)) -
         3.0 * std::log(rr) - (rr + 1.0);
}

ScanReport alr_statistic(const PrefixSums& prefix, const ScanSet& set,
                         const AlrConfig& config) {
  config.validate();
  const std::size_t n = prefix.rows();
  const std::size_t T = prefix.cols();
  if (n < 2) {
    throw std::invalid_argument(
        "alr_statistic: needs N >= 2 sequences; use the single-sequence "
        "statistic for N = 1");
  }
  if (T != set.length()) {
    throw std::invalid_argument("alr_statistic: data has T=" + std::to_string(T) +
                                " but scan set has T=" +
                                std::to_string(set.length()));
  }

  std::map<std::size_t, BetaIntegrator> integrators;
  for (const auto& m : set.members()) {
    integrators.try_emplace(m.interval.length, n, T, m.interval.length,
                            config.quadrature_nodes);
  }

  const auto& members = set.members();
  const std::size_t count = members.size();
  std::vector<IntervalStatistic> records(count);
  parallel_blocks(count, config.workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> scores(n);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& m = members[i];
      pooled_scores_into(prefix, m.interval, scores);
      auto& rec = records[i];
      rec.interval = m.interval;
      rec.level = m.level;
      try {
        rec.raw = integrators.at(m.interval.length).log_integral(scores);
      } catch (const NumericError& e) {
        std::ostringstream msg;
        msg << e.what() << " in window r=" << m.level << ", j=" << m.interval.start
            << ", l=" << m.interval.length;
        throw NumericError(msg.str());
      }
      rec.penalty = -log_alr_weight(m.level);
      rec.penalized = rec.raw - rec.penalty;
    }
  });

  ScanReport report;
  report.kind = StatKind::alr;
  report.rows = n;
  report.cols = T;
  report.intervals = count;
  LogSumExp total;
  double best = kNegInf;
  for (std::size_t i = 0; i < count; ++i) {
    total.add(records[i].penalized);
    if (records[i].penalized > best) {
      best = records[i].penalized;
      report.argmax = members[i];
    }
  }
  report.log_global_value = total.value();
  report.global_value = std::exp(report.log_global_value);
  report.threshold = config.threshold.value_or(alr_default_threshold(n));
  report.reject = report.log_global_value >= reject_level(report.threshold);
  if (config.keep_records) report.records = std::move(records);
  return report;
}

ScanReport alr_statistic(const DataMatrix& data, const ScanSet& set,
                         const AlrConfig& config) {
  return alr_statistic(PrefixSums(data), set, config);
}

double log_alr_sparse_mixture(std::span<const double> x, const AlrConfig& config) {
  config.validate();
  if (x.size() < 2) {
    throw std::invalid_argument("log_alr_sparse_mixture: needs N >= 2");
  }
  const double nn = static_cast<double>(x.size());
  // With zeta = 0 the boundary switches branch at beta = 3/4 only.
  const double knots[] = {0.75};
  const auto rule = composite_gauss_legendre(0.0, 1.0, knots, config.quadrature_nodes);
  LogSumExp acc;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double beta = rule.nodes[k];
    const double pi = std::pow(nn, -beta);
    const double b = b_aligned(nn, beta, 0.0);
    double g = 0.0;
    for (double v : x) g += log_likelihood_ratio_term(v, pi, b);
    acc.add(std::log(rule.weights[k]) + g);
  }
  const double log_const =
      std::log(6.0 / (std::numbers::pi * std::numbers::pi)) - 2.0;
  return log_const + acc.value();
}

double log_alr_single_sequence(std::span<const double> row, const ScanSet& set) {
  if (row.size() != set.length()) {
    throw std::invalid_argument("log_alr_single_sequence: row length != T");
  }
  const DataMatrix data(1, row.size(), std::vector<double>(row.begin(), row.end()));
  const PrefixSums prefix(data);
  const double T = static_cast<double>(row.size());
  LogSumExp acc;
  for (const auto& m : set.members()) {
    const double ell = static_cast<double>(m.interval.length);
    const double y =
        prefix.sum(0, m.interval.start, m.interval.end()) / std::sqrt(ell);
    const double b = b_single_sequence(T, ell);
    acc.add(log_alr_weight(m.level) + b * y - 0.5 * b * b);
  }
  return acc.value();
}

std::vector<ProfilePoint> likelihood_profile_over_j(const DataMatrix& data,
                                                    std::size_t ell,
                                                    const AlrConfig& config) {
  config.validate();
  const std::size_t n = data.rows();
  const std::size_t T = data.cols();
  if (n < 2) throw std::invalid_argument("likelihood_profile_over_j: needs N >= 2");
  if (ell < 1 || ell > T) {
    throw std::invalid_argument("likelihood_profile_over_j: need 1 <= ell <= T");
  }
  const PrefixSums prefix(data);
  const BetaIntegrator integrator(n, T, ell, config.quadrature_nodes);
  std::vector<ProfilePoint> out(T - ell + 1);
  parallel_blocks(out.size(), config.workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> scores(n);
    for (std::size_t j = lo; j < hi; ++j) {
      pooled_scores_into(prefix, {j, ell}, scores);
      const double v = integrator.log_integral(scores);
      out[j] = {j, v, std::exp(v)};
    }
  });
  return out;
}

std::vector<BetaProfilePoint> likelihood_profile_over_beta(
    const DataMatrix& data, std::size_t ell, std::size_t j,
    std::span<const double> betas) {
  const std::size_t n = data.rows();
  if (n < 2) throw std::invalid_argument("likelihood_profile_over_beta: needs N >= 2");
  const PrefixSums prefix(data);
  const auto scores = pooled_scores(prefix, {j, ell});
  std::vector<BetaProfilePoint> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    out.push_back({beta,
                   log_interval_likelihood(scores.scores, beta, n, data.cols(), ell),
                   std::pow(static_cast<double>(n), -beta)});
  }
  return out;
}

std::size_t profile_argmax(std::span<const ProfilePoint> profile) {
  if (profile.empty()) throw std::invalid_argument("profile_argmax: empty profile");
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i].log_likelihood > profile[best].log_likelihood) best = i;
  }
  return best;
}

std::size_t profile_argmax(std::span<const BetaProfilePoint> profile) {
  if (profile.empty()) throw std::invalid_argument("profile_argmax: empty profile");
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i].log_likelihood > profile[best].log_likelihood) best = i;
  }
  return best;
}

}  // namespace alscan
