#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "alscan/alr.hpp"
#include "alscan/boundary.hpp"
#include "alscan/sim.hpp"
#include "oracles/naive.hpp"

using namespace alscan;

namespace {

DataMatrix noise(std::size_t n, std::size_t T, std::uint64_t seed) {
  return generate(SignalModel::null(n, T), seed).data;
}

// log of the beta-integrated likelihood of one window, from plain products
// over an independently tabulated rule.
double naive_log_integral(const std::vector<double>& y, std::size_t n, std::size_t T,
                          std::size_t ell) {
  const double nn = double(n);
  const double zeta = zeta_of_scale(nn, T, ell);
  double total = 0.0;
  for (const auto& [beta, w] : oracle::composite_rule({0.75 * (1 - zeta), 1 - zeta})) {
    total += w * oracle::likelihood_product(y, std::pow(nn, -beta), b_aligned(nn, beta, zeta));
  }
  return std::log(total);
}

}  // namespace

TEST(LikelihoodTerms, MatchDirectFormula) {
  for (double y : {-5.0, -1.0, 0.0, 0.5, 3.0, 10.0}) {
    for (double pi : {0.0, 0.01, 0.3, 1.0}) {
      for (double mu : {0.0, 0.7, 2.5}) {
        const double direct = 1 - pi + pi * std::exp(mu * y - mu * mu / 2);
        EXPECT_NEAR(likelihood_ratio_term(y, pi, mu), direct, 1e-13 * direct);
        EXPECT_NEAR(log_likelihood_ratio_term(y, pi, mu), std::log(direct), 1e-12);
      }
    }
  }
  EXPECT_NEAR(log_likelihood_ratio_term(1e4, 0.1, 3.0), 3e4 - 4.5 + std::log(0.1), 1e-9);
  EXPECT_THROW(likelihood_ratio_term(0, 1.5, 1), std::invalid_argument);
}

TEST(LevelWeights, SumToAtMostOneOverLevelsAndWindows) {
  EXPECT_NEAR(log_alr_weight(1), std::log(6 / (std::numbers::pi * std::numbers::pi)) - 2, 1e-15);
  // sum_r r e^(r+1) * weight(r) = 6 / pi^2 * sum 1 / r^2 <= 1.
  double total = 0.0;
  for (int r = 1; r < 200; ++r) total += r * std::exp(r + 1.0) * std::exp(log_alr_weight(r));
  EXPECT_LE(total, 1.0);
  EXPECT_GT(total, 0.99);
}

TEST(BetaIntegrator, ProductMatchesPlainProduct) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.5, 2.0);
  for (std::size_t n : {2u, 7u, 50u, 333u}) {
    const BetaIntegrator integ(n, 100, 10, 64);
    std::vector<double> y(n);
    for (double& v : y) v = z(rng);
    for (std::size_t k = 0; k < integ.betas().size(); k += 7) {
      const double beta = integ.betas()[k];
      const double pi = std::pow(double(n), -beta);
      const double mu = b_aligned(double(n), beta, integ.zeta());
      const double ref = std::log(oracle::likelihood_product(y, pi, mu));
      EXPECT_NEAR(integ.log_product(y, k), ref, 1e-10 * std::max(1.0, std::abs(ref)))
          << "n=" << n << " k=" << k;
    }
  }
}

TEST(BetaIntegrator, IntegralMatchesIndependentRule) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (std::size_t n : {2u, 5u, 8u, 40u}) {
    for (std::size_t ell : {1u, 4u, 16u}) {
      std::vector<double> y(n);
      for (double& v : y) v = z(rng) + 0.5;
      const BetaIntegrator integ(n, 16, ell, 64);
      EXPECT_NEAR(integ.log_integral(y), naive_log_integral(y, n, 16, ell), 1e-10);
    }
  }
}

TEST(BetaIntegrator, ExtremeScoresStayFinite) {
  const BetaIntegrator integ(100, 64, 8, 64);
  std::vector<double> y(100, 0.0);
  y[0] = 60.0;
  y[1] = -60.0;
  EXPECT_TRUE(std::isfinite(integ.log_integral(y)));
  std::vector<double> big(100, 8.0);
  EXPECT_TRUE(std::isfinite(integ.log_integral(big)));
}

TEST(BetaIntegrator, NodesCoverUnitIntervalWithKnots) {
  const BetaIntegrator integ(207, 42075, 51, 64);
  EXPECT_EQ(integ.betas().size(), 3u * 64u);
  double sum = 0.0;
  for (double w : integ.weights()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_GT(integ.betas().front(), 0.0);
  EXPECT_LT(integ.betas().back(), 1.0);
}

TEST(AlrStatistic, RecordsMatchNaivePerWindow) {
  const std::size_t n = 6;
  const std::size_t T = 16;
  const auto data = noise(n, T, 21);
  oracle::Matrix rows;
  for (std::size_t i = 0; i < n; ++i) rows.emplace_back(data.row(i).begin(), data.row(i).end());
  const auto set = build_scan_set(T);
  const auto report = alr_statistic(data, set);
  ASSERT_EQ(report.records.size(), set.size());
  double total = 0.0;
  for (const auto& rec : report.records) {
    const auto y = oracle::pooled(rows, rec.interval.start, rec.interval.length);
    EXPECT_NEAR(rec.raw, naive_log_integral(y, n, T, rec.interval.length), 1e-10);
    total += std::exp(rec.penalized);
  }
  EXPECT_NEAR(report.log_global_value, std::log(total), 1e-12);
  EXPECT_EQ(report.threshold, 20.0);
}

TEST(AlrStatistic, SingleColumnEqualsSparseMixture) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  for (std::size_t n : {2u, 10u, 500u}) {
    std::vector<double> x(n);
    for (double& v : x) v = z(rng) + (rng() % 10 == 0 ? 2.0 : 0.0);
    const DataMatrix data(n, 1, x);
    const auto report = alr_statistic(data, build_scan_set(1));
    EXPECT_NEAR(report.log_global_value, log_alr_sparse_mixture(x), 1e-10);
  }
}

TEST(AlrStatistic, SingleSequenceMatchesBruteForce) {
  const auto data = noise(1, 200, 5);
  const auto set = build_scan_set(200);
  double total = 0.0;
  const std::vector<double> row(data.row(0).begin(), data.row(0).end());
  for (const auto& m : set.members()) {
    const double ell = double(m.interval.length);
    const double y = oracle::interval_sum(row, m.interval.start, m.interval.length) / std::sqrt(ell);
    const double b = std::sqrt(2 * std::log(std::exp(1.0) * 200 / ell));
    total += std::exp(log_alr_weight(m.level)) * std::exp(b * y - b * b / 2);
  }
  EXPECT_NEAR(log_alr_single_sequence(row, set), std::log(total), 1e-10);
}

TEST(AlrStatistic, WorkerInvariantAndArgmax) {
  const auto data = noise(30, 100, 8);
  const auto set = build_scan_set(100);
  AlrConfig four;
  four.workers = 4;
  const auto a = alr_statistic(data, set);
  const auto b = alr_statistic(data, set, four);
  EXPECT_EQ(a.log_global_value, b.log_global_value);
  ASSERT_TRUE(a.argmax.has_value());
  EXPECT_EQ(a.argmax->interval, b.argmax->interval);
}

TEST(AlrStatistic, ThresholdAndValidation) {
  const auto data = noise(20, 32, 1);
  const auto set = build_scan_set(32);
  AlrConfig cfg;
  cfg.threshold = 0.0;
  EXPECT_TRUE(alr_statistic(data, set, cfg).reject);
  cfg.threshold = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(alr_statistic(data, set, cfg).reject);
  cfg.quadrature_nodes = 4;
  EXPECT_THROW(alr_statistic(data, set, cfg), std::invalid_argument);
  EXPECT_THROW(alr_statistic(noise(1, 32, 1), set), std::invalid_argument);
  EXPECT_THROW(alr_statistic(data, build_scan_set(31)), std::invalid_argument);
  EXPECT_EQ(alr_default_threshold(1000), 20.0);
  EXPECT_NEAR(alr_default_threshold(1000000000000), std::log(1e12), 1e-12);
}

TEST(Profiles, OverStartMatchesIntegrator) {
  const auto data = noise(12, 40, 6);
  const auto prof = likelihood_profile_over_j(data, 5);
  ASSERT_EQ(prof.size(), 36u);
  const BetaIntegrator integ(12, 40, 5, 64);
  const PrefixSums prefix(data);
  for (const auto& p : prof) {
    const auto y = pooled_scores(prefix, {p.j, 5});
    EXPECT_EQ(p.log_likelihood, integ.log_integral(y.scores));
  }
  EXPECT_THROW(likelihood_profile_over_j(data, 41), std::invalid_argument);
}

TEST(Profiles, OverBetaMatchesPlainProduct) {
  const auto data = noise(12, 40, 6);
  oracle::Matrix rows;
  for (std::size_t i = 0; i < 12; ++i) rows.emplace_back(data.row(i).begin(), data.row(i).end());
  const std::vector<double> betas{0.1, 0.5, 0.9};
  const auto prof = likelihood_profile_over_beta(data, 5, 3, betas);
  const auto y = oracle::pooled(rows, 3, 5);
  const double zeta = zeta_of_scale(12, 40, 5);
  for (const auto& p : prof) {
    const double pi = std::pow(12.0, -p.beta);
    EXPECT_EQ(p.fraction, pi);
    EXPECT_NEAR(p.log_likelihood,
                std::log(oracle::likelihood_product(y, pi, b_aligned(12, p.beta, zeta))), 1e-10);
  }
}

TEST(Profiles, ArgmaxFindsPlantedSegment) {
  SignalModel model{200, 400, {}};
  SegmentSpec seg;
  seg.interval = {150, 30};
  seg.pi = 0.1;
  seg.mu = 5.0;
  model.segments.push_back(seg);
  const auto data = generate(model, 12).data;
  const auto prof = likelihood_profile_over_j(data, 30);
  const auto j = prof[profile_argmax(std::span<const ProfilePoint>(prof))].j;
  EXPECT_LE(std::abs(double(j) - 150.0), 5.0);
}
