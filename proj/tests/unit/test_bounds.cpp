#include <gtest/gtest.h>

#include <cmath>

#include "ellest/assumptions.hpp"
#include "ellest/bounds.hpp"

using namespace ellest;

// Expected values below were evaluated by hand from the displayed formulas.

TEST(Bounds, GeneralDeviationBounds) {
  EXPECT_NEAR(thm1_bound(1.5, 0.5, 1.0, 1.0, 100.0, 0.2, 0.1, 0.5), 51.3842712474619, 1e-9);
  EXPECT_NEAR(thm2_bound(1.5, 0.5, 1.5, 1.0, 1.0, 0.2, 0.1, 0.3), 215.1, 1e-9);
  EXPECT_NEAR(thm1_bound(1.5, 0.5, 0.0, 0.0, 50.0, 0.0, 0.0, 0.0), 0.0, 1e-15);
  EXPECT_THROW(thm1_bound(0.0, 0.5, 1.0, 1.0, 10.0, 0.0, 0.0, 0.5), std::invalid_argument);
}

TEST(Bounds, WassersteinAndL2) {
  EXPECT_NEAR(wasserstein_bound(200.0, 1.0, 1.0, 0.01), 0.40142135623730946, 1e-9);
  EXPECT_NEAR(l2_bound(std::sqrt(2.0), 200.0, 0.5, 1.0, 0.0), 0.8282842712474618, 1e-9);
}

TEST(Bounds, VcTotalVariation) {
  EXPECT_NEAR(vc_bound_tv(2.0, 100.0, 1.0, 1.0, 0.0), 12.951953353148136, 1e-9);
  // The leading constant 40 sqrt(5).
  EXPECT_NEAR(vc_bound_tv(1.0, 1.0, 0.0, 0.0, 0.0), 89.44271909999159, 1e-9);
  EXPECT_THROW(vc_bound_tv(0.5, 100.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Bounds, RegressionConstant) {
  EXPECT_NEAR(regression_bound_tv(2.0, 50.0, 1.5, 0.01), 68.39076382365066, 1e-9);
  EXPECT_NEAR(regression_bound_tv(3.0, 4.0, 0.0, 0.0), 277.0, 1e-9);
}

TEST(Bounds, FastRatePlugIn) {
  EXPECT_EQ(kFastRateConstant, 4.5e5);
  EXPECT_NEAR(fast_bound_tv(1.5, 2.0, 1000.0, 1.0, 0.001), 3458852.821026786, 1e-6);
  EXPECT_NEAR(fast_bound_tv(1.5, 2.0, 1000.0, 1.0, 0.001) / 3458852.821026786, 1.0, 1e-12);
}

TEST(Bounds, HistogramConstants) {
  EXPECT_EQ(cj_constant(1.5), 4.0);
  EXPECT_EQ(cj_constant(2.0), 4.0);
  EXPECT_NEAR(cj_constant(2.5), 42.795737736688025, 1e-9);
  EXPECT_NEAR(cj_constant(3.0), 48.463890124953515, 1e-9);
  EXPECT_NEAR(cj_constant(4.0), 68.3882644285991, 1e-9);
  EXPECT_NEAR(cj_constant(10.0), 189.70382614419222, 1e-9);
  EXPECT_THROW(cj_constant(1.0), std::invalid_argument);
  EXPECT_NEAR(lj_histogram_bound(3.0, 10.0, 400.0, 1.0, 1.0, 0.02, 1.3), 10.19620750692571, 1e-9);
  EXPECT_NEAR(linf_bound(8.0, 500.0, 2.0, 1.0, 0.0), 3.1480555681497275, 1e-9);
}

TEST(Bounds, MonotoneDensities) {
  EXPECT_NEAR(monotone_bound(3.0, 300.0, 1.0, 0.0), 13.1286377228759, 1e-9);
  EXPECT_NEAR(monotone_bound_iid(3.0, 300.0, 1.0, 0.01), 26.3072754457518, 1e-9);
}

TEST(Bounds, BirgeApproximation) {
  EXPECT_EQ(birge_approximation(0.0, 1.0, 7.0), 0.0);
  EXPECT_NEAR(birge_approximation(3.0, 2.0, 5.0), 0.47577316159455196, 1e-12);
  EXPECT_LT(birge_approximation(3.0, 2.0, 50.0), birge_approximation(3.0, 2.0, 5.0));
}

TEST(Bounds, MonotoneOptimalPieces) {
  const double h = 4.0, l = 1.0, n = 5000.0, xi = 1.0;
  auto c = monotone_optimal_d(h, l, n, xi, 200);
  ASSERT_GE(c.d, 1);
  EXPECT_NEAR(c.bound, monotone_bound_iid(c.d, n, xi, birge_approximation(h, l, c.d)), 1e-12);
  for (int d = 1; d <= 200; ++d) {
    EXPECT_LE(c.bound, monotone_bound_iid(d, n, xi, birge_approximation(h, l, d)) + 1e-12);
  }
}

TEST(Bounds, C1Constant) {
  EXPECT_NEAR(c1_constant(0.5, 1.5), 0.006348886007000236, 1e-12);
  EXPECT_NEAR(c1_constant(1.0, 1.0), 0.025172502615276794, 1e-12);
}
