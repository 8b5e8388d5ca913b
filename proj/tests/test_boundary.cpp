#include <gtest/gtest.h>

#include <cmath>

#include "alscan/boundary.hpp"

using namespace alscan;

TEST(RhoStar, BranchesAndKnot) {
  EXPECT_NEAR(rho_star(0.6), 0.1, 1e-15);
  EXPECT_NEAR(rho_star(0.75), 0.25, 1e-15);
  EXPECT_NEAR(rho_star(0.75 + 1e-12), 0.25, 1e-11);
  EXPECT_NEAR(rho_star(0.84), 0.36, 1e-15);
  EXPECT_THROW(rho_star(0.5), std::invalid_argument);
  EXPECT_THROW(rho_star(1.0), std::invalid_argument);
}

TEST(BAligned, FrozenValuesPerCase) {
  const auto worked = b_aligned_branch({207, 0.568, 0.383, 0});
  EXPECT_EQ(worked.branch, BoundaryBranch::moderate);
  EXPECT_NEAR(worked.value, 1.8423479043391585, 1e-13);
  EXPECT_NEAR(worked.value / std::sqrt(51.0), 0.2579803078296865, 1e-13);

  const auto c1 = b_aligned_branch({100, 0.3, 0.2, 0});
  EXPECT_EQ(c1.branch, BoundaryBranch::polynomial_log);
  EXPECT_NEAR(c1.value, 0.5788948961451547, 1e-13);

  const auto c3 = b_aligned_branch({100, 0.5, 0.6, 0});
  EXPECT_EQ(c3.branch, BoundaryBranch::power);
  EXPECT_NEAR(c3.value, 1.2589254117941673, 1e-13);
}

TEST(BAligned, ClosedLeftBranchConventions) {
  // zeta exactly 1 - 4 beta / 3 stays in case 1; zeta exactly 1 - beta in case 2.
  EXPECT_EQ(b_aligned_branch({1000, 0.3, 0.6, 0}).branch, BoundaryBranch::polynomial_log);
  EXPECT_EQ(b_aligned_branch({1000, 0.5, 0.5, 0}).branch, BoundaryBranch::moderate);
}

TEST(BAligned, KnotRatioAtLargeN) {
  const double n = 1e6;
  for (double zeta : {0.0, 0.1, 0.3, 0.5}) {
    const double knot = 0.75 * (1.0 - zeta);
    const double left = b_aligned(n, knot, zeta);
    const double right = b_aligned(n, std::nextafter(knot, 1.0), zeta);
    const double ratio = left / right;
    EXPECT_GE(ratio, 0.8) << "zeta=" << zeta;
    EXPECT_LE(ratio, 1.25) << "zeta=" << zeta;
  }
}

TEST(BAligned, MonotoneOnEachBranch) {
  const double n = 1000;
  for (int a = 1; a < 32; ++a) {
    for (int b = 0; b < 32; ++b) {
      const double beta = a / 32.0;
      const double zeta = b / 32.0;
      const auto here = b_aligned_branch({n, beta, zeta, 0});
      const double db = 1.0 / 64.0;
      const auto up_beta = b_aligned_branch({n, std::min(beta + db, 0.999), zeta, 0});
      if (up_beta.branch == here.branch) {
        EXPECT_GE(up_beta.value, here.value - 1e-14);
      }
      const auto up_zeta = b_aligned_branch({n, beta, zeta + db, 0});
      if (up_zeta.branch == here.branch) {
        EXPECT_GE(up_zeta.value, here.value - 1e-14);
      }
    }
  }
}

TEST(BAligned, SparseMixtureLimit) {
  const double n = 1e8;
  for (double beta : {0.76, 0.85, 0.95}) {
    const double ratio = b_aligned(n, beta, 0) / std::sqrt(2 * rho_star(beta) * std::log(n));
    EXPECT_GE(ratio, 0.99);
    EXPECT_LE(ratio, 1.01);
  }
}

TEST(BHetero, ReducesToAlignedAtZeroTau) {
  for (int a = 1; a < 40; ++a) {
    for (int b = 0; b < 25; ++b) {
      const double beta = a / 40.0;
      const double zeta = b * 0.06;
      EXPECT_EQ(b_hetero(1000, beta, zeta, 0.0), b_aligned(1000, beta, zeta));
    }
  }
}

TEST(BHetero, BranchesAndFrozenValue) {
  const auto v = b_hetero_branch({100, 0.5, 0.1, 0.5});
  EXPECT_EQ(v.branch, BoundaryBranch::hetero_linear);
  EXPECT_NEAR(v.value, 0.47985259121880836, 1e-13);
  // Both sides agree at the linear/root knot zeta = 1 - 4 beta / (3 - tau).
  const double knot = 1.0 - 4 * 0.5 / 2.5;
  EXPECT_NEAR(b_hetero(100, 0.5, std::nextafter(knot, 0.0), 0.5),
              b_hetero(100, 0.5, std::nextafter(knot, 1.0), 0.5), 1e-12);

  const auto zero = b_hetero_branch({100, 0.3, 0.3, 1.0});
  EXPECT_EQ(zero.branch, BoundaryBranch::hetero_zero);
  EXPECT_EQ(zero.value, 0.0);

  const auto root = b_hetero_branch({100, 0.6, 0.3, 0.2});
  EXPECT_EQ(root.branch, BoundaryBranch::hetero_root);
  const double expect =
      (std::sqrt(2 * 0.7) - std::sqrt(2 * 1.2 * 0.1)) * std::sqrt(std::log(100.0));
  EXPECT_NEAR(root.value, expect, 1e-14);

  // tau >= 3 leaves only the root branch.
  EXPECT_EQ(b_hetero_branch({100, 0.6, 0.3, 3.5}).branch, BoundaryBranch::hetero_root);
  EXPECT_THROW(b_hetero(100, 0.5, 0.5, 0.1), std::invalid_argument);
}

TEST(Zeta, FrozenValuesAndIdentity) {
  EXPECT_NEAR(zeta_of_scale(207, 42075, 51), 0.38314718203181829, 1e-14);
  EXPECT_NEAR(zeta_of_scale(10, 10000, 1), 1.0090402199720357, 1e-14);
  EXPECT_NEAR(zeta_corollary2(10, 100, 10), 0.5188540162764724, 1e-14);
  EXPECT_EQ(zeta_of_scale(50, 64, 64), 0.0);
  EXPECT_EQ(zeta_corollary2(50, 64, 64), 0.0);
  for (std::size_t T : {10u, 1000u, 100000u}) {
    for (std::size_t ell = 1; ell <= T; ell = ell * 3 + 1) {
      EXPECT_NEAR(zeta_of_scale(207, T, ell), zeta_corollary2(207, T, ell), 1e-12);
    }
  }
  EXPECT_THROW(zeta_of_scale(1, 10, 1), std::invalid_argument);
  EXPECT_THROW(zeta_of_scale(10, 10, 11), std::invalid_argument);
}

TEST(Boundary, SingleSequenceAndNonaligned) {
  EXPECT_NEAR(b_single_sequence(1024, 4), 3.6180595474589863, 1e-13);
  EXPECT_NEAR(b_single_sequence(50, 50), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(b_single_sequence(std::exp(1.0) * 3.0, 3.0), 2.0, 1e-14);
  EXPECT_NEAR(b_nonaligned(100, 0.5, 0.5), 1.5174271293851464, 1e-13);
  EXPECT_NEAR(b_nonaligned(100, 0.8, 1.0), 2.934703967695672, 1e-13);
  EXPECT_LT(b_nonaligned(100, 0.4, 0.2 + 1e-9), 1e-3);
  EXPECT_THROW(b_nonaligned(100, 0.4, 0.1), std::invalid_argument);
}

TEST(Boundary, FractionToBeta) {
  EXPECT_NEAR(beta_for_fraction(207, 0.05), 0.5617645313188589, 1e-14);
  EXPECT_THROW(beta_for_fraction(207, 0.0), std::invalid_argument);
}

TEST(Boundary, QueryValidation) {
  EXPECT_THROW(b_aligned(1.5, 0.5, 0.1), std::invalid_argument);
  EXPECT_THROW(b_aligned(100, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(b_aligned(100, 0.5, -0.1), std::invalid_argument);
  EXPECT_THROW(b_hetero(100, 0.5, 0.1, -1), std::invalid_argument);
}
