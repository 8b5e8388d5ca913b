#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "alscan/boundary.hpp"
#include "alscan/sim.hpp"

using namespace alscan;

namespace {

bool same_data(const DataMatrix& a, const DataMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::equal(a.values().begin(), a.values().end(), b.values().begin());
}

SegmentSpec segment(std::size_t j, std::size_t ell, double pi, double mu) {
  SegmentSpec s;
  s.interval = {j, ell};
  s.pi = pi;
  s.mu = mu;
  return s;
}

}  // namespace

TEST(Rng, SplitMixKnownOutputAndDerivedSeeds) {
  // Reference outputs of SplitMix64 seeded with 0.
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 2, 0));
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 1, 1));
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(2, 1, 0));
  EXPECT_EQ(derive_seed(7, 3, 9), derive_seed(7, 3, 9));
}

TEST(Generate, ReproducibleAndSeedSensitive) {
  SignalModel model{50, 80, {segment(10, 20, 0.2, 3.0)}};
  const auto a = generate(model, 42);
  const auto b = generate(model, 42);
  const auto c = generate(model, 43);
  EXPECT_TRUE(same_data(a.data, b.data));
  EXPECT_EQ(a.truth.carriers, b.truth.carriers);
  EXPECT_FALSE(same_data(a.data, c.data));
}

TEST(Generate, NoCarriersOrZeroShiftReproducesNoise) {
  const auto noise = generate(SignalModel::null(30, 40), 5).data;
  SignalModel zero_pi{30, 40, {segment(5, 10, 0.0, 3.0)}};
  SignalModel zero_mu{30, 40, {segment(5, 10, 0.5, 0.0)}};
  EXPECT_TRUE(same_data(generate(zero_pi, 5).data, noise));
  EXPECT_TRUE(same_data(generate(zero_mu, 5).data, noise));
  EXPECT_TRUE(generate(zero_pi, 5).truth.carriers[0].empty());
}

TEST(Generate, ShiftLandsOnCarrierRowsInsideTheSegment) {
  const double mu = 4.0;
  SignalModel model{40, 30, {segment(10, 16, 0.3, mu)}};
  const auto s = generate(model, 8);
  const auto noise = generate(SignalModel::null(40, 30), 8).data;
  const auto& carriers = s.truth.carriers[0];
  for (std::size_t n = 0; n < 40; ++n) {
    const bool carrier = std::binary_search(carriers.begin(), carriers.end(), n);
    for (std::size_t t = 0; t < 30; ++t) {
      const double shift = (carrier && t >= 10 && t < 26) ? mu / 4.0 : 0.0;
      EXPECT_NEAR(s.data(n, t), noise(n, t) + shift, 1e-15);
    }
  }
}

TEST(Generate, CarrierCountConcentrates) {
  const std::size_t n = 10000;
  const double pi = 0.3;
  SignalModel model{n, 2, {segment(0, 1, pi, 1.0)}};
  int inside = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const double count = double(generate(model, 1000 + rep).truth.carriers[0].size());
    if (std::abs(count - n * pi) <= 3 * std::sqrt(n * pi * (1 - pi))) ++inside;
  }
  EXPECT_GE(inside, 99);
}

TEST(Generate, HeteroscedasticCarriersHaveExtraVariance) {
  const std::size_t n = 4000;
  SegmentSpec s = segment(0, 4, 1.0, 0.0);
  s.tau = 3.0;
  const auto sample = generate(SignalModel{n, 4, {s}}, 3);
  double sum = 0.0;
  double sq = 0.0;
  for (double v : sample.data.values()) {
    sum += v;
    sq += v * v;
  }
  const double m = sum / double(4 * n);
  const double var = sq / double(4 * n) - m * m;
  EXPECT_NEAR(var, 4.0, 0.25);
}

TEST(Generate, BoundaryMultipleResolvesMean) {
  SegmentSpec s;
  s.interval = {0, 51};
  s.beta = 0.568;
  s.kappa = 1.5;
  const double zeta = zeta_of_scale(207, 42075, 51);
  EXPECT_NEAR(s.mean(207, 42075), 1.5 * b_aligned(207, 0.568, zeta), 1e-12);
  s.epsilon = 0.1;
  EXPECT_NEAR(s.fraction(207), std::pow(207.0, -0.468), 1e-15);
}

TEST(Generate, ValidationRejectsBadModels) {
  EXPECT_THROW(generate(SignalModel{10, 20, {segment(15, 10, 0.1, 1)}}, 1), std::invalid_argument);
  EXPECT_THROW(generate(SignalModel{10, 20, {segment(0, 10, 0.1, 1), segment(5, 10, 0.1, 1)}}, 1),
               std::invalid_argument);
  EXPECT_THROW(generate(SignalModel{10, 20, {segment(0, 10, 1.5, 1)}}, 1), std::invalid_argument);
  EXPECT_THROW(generate(SignalModel{10, 20, {segment(0, 10, 0.1, -1)}}, 1), std::invalid_argument);
  SegmentSpec both = segment(0, 10, 0.1, 1);
  both.kappa = 1.0;
  EXPECT_THROW(generate(SignalModel{10, 20, {both}}, 1), std::invalid_argument);
  SegmentSpec neither = segment(0, 10, 0.1, 1);
  neither.mu.reset();
  EXPECT_THROW(generate(SignalModel{10, 20, {neither}}, 1), std::invalid_argument);
}

TEST(Generate, LengthForZeta) {
  const std::size_t ell = length_for_zeta(200, 256, 0.3);
  const double got = zeta_of_scale(200, 256, ell);
  for (std::size_t other : {ell - 1, ell + 1}) {
    EXPECT_LE(std::abs(got - 0.3), std::abs(zeta_of_scale(200, 256, other) - 0.3));
  }
}

TEST(MonteCarlo, ExtremeThresholdsGiveDegenerateRates) {
  SignalModel model{20, 32, {segment(4, 8, 0.3, 3.0)}};
  const auto always = estimate_errors(model, StatKind::pbj,
                                      -std::numeric_limits<double>::infinity(), 20, 1);
  EXPECT_EQ(always.type1_rate, 1.0);
  EXPECT_EQ(always.type2_rate, 0.0);
  const auto never = estimate_errors(model, StatKind::phc,
                                     std::numeric_limits<double>::infinity(), 20, 1);
  EXPECT_EQ(never.type1_rate, 0.0);
  EXPECT_EQ(never.type2_rate, 1.0);
  EXPECT_EQ(never.type1_se, 0.0);
}

TEST(MonteCarlo, SummariesAreReproducibleAndWorkerInvariant) {
  SignalModel model{30, 64, {segment(10, 16, 0.2, 3.0)}};
  const StatisticThreshold stats[] = {{StatKind::phc, 6.8}, {StatKind::pbj, 6.8},
                                      {StatKind::alr, 20.0}};
  MonteCarloOptions many;
  many.workers = 3;
  const auto a = estimate_errors(model, stats, 12, 99);
  const auto b = estimate_errors(model, stats, 12, 99, many);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a[k].h0_values, b[k].h0_values);
    EXPECT_EQ(a[k].h1_values, b[k].h1_values);
    EXPECT_EQ(a[k].h0_seeds, b[k].h0_seeds);
    EXPECT_EQ(a[k].type2_rate, b[k].type2_rate);
  }
  EXPECT_NEAR(a[0].type1_se, binomial_se(a[0].type1_rate, 12), 1e-15);
  EXPECT_NEAR(a[0].error_sum_se(), std::hypot(a[0].type1_se, a[0].type2_se), 1e-15);
}

TEST(Calibrate, QuantilesAreOrderStatistics) {
  const double levels[] = {0.0, 0.5, 0.95, 1.0};
  const auto table = calibrate(10, 16, StatKind::pbj, 100, levels, 3);
  ASSERT_EQ(table.null_values.size(), 100u);
  EXPECT_TRUE(std::is_sorted(table.null_values.begin(), table.null_values.end()));
  EXPECT_EQ(table.quantile(0.0), table.null_values.front());
  EXPECT_EQ(table.quantile(1.0), table.null_values.back());
  EXPECT_EQ(table.quantile(0.95), table.null_values[94]);
  EXPECT_EQ(table.quantiles.size(), 4u);
  EXPECT_THROW(calibrate(10, 16, StatKind::pbj, 50, levels, 3), std::invalid_argument);
}

TEST(Calibrate, PhcNullQuantileBelowLemmaThreshold) {
  const double levels[] = {0.95};
  const auto table = calibrate(100, 128, StatKind::phc, 500, levels, 2024);
  EXPECT_LE(table.quantile(0.95), 2 * std::log(100.0));
}

TEST(MonteCarlo, PbjTypeOneUnderLemmaThreshold) {
  const auto s = estimate_errors(SignalModel::null(100, 128), StatKind::pbj,
                                 lemma_threshold(100), 500, 77);
  EXPECT_LE(s.type1_rate, 0.05);
}

TEST(PowerStudy, CellsFollowTheGrid) {
  PowerConfig cfg;
  cfg.cols = 64;
  cfg.rows_grid = {20, 40};
  cfg.mu_multiples = {0.5, 2.0};
  cfg.segment.interval = {0, 8};
  cfg.segment.beta = 0.3;
  cfg.target_zeta = 0.3;
  cfg.kinds = {StatKind::pbj};
  cfg.reps = 5;
  const auto cells = power_study(cfg);
  ASSERT_EQ(cells.size(), 4u);
  for (const auto& cell : cells) {
    ASSERT_EQ(cell.summaries.size(), 1u);
    const auto& seg = cell.model.segments.at(0);
    EXPECT_EQ(seg.kappa.value(), cell.mu_multiple);
    EXPECT_EQ(seg.interval.length, length_for_zeta(cell.rows, 64, 0.3));
    EXPECT_LE(seg.interval.end(), 64u);
  }
}
