#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ellest/distances.hpp"
#include "ellest/estimator.hpp"
#include "ellest/models.hpp"

using namespace ellest;

namespace {

Model two_point_model() { return discrete_model({0.0, 1.0}, {{0.9, 0.1}, {0.1, 0.9}}); }

void expect_report_invariants(const EstimateReport& r) {
  const std::size_t m = r.sup_stat.size();
  for (std::size_t i = 0; i < m; ++i) {
    EXPECT_EQ(r.pairwise(i, i), 0.0);
    double mx = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      EXPECT_EQ(r.pairwise(i, j), -r.pairwise(j, i));
      mx = std::max(mx, r.pairwise(i, j));
    }
    EXPECT_EQ(r.sup_stat[i], mx);
    EXPECT_GE(r.sup_stat[i], 0.0);
  }
  ASSERT_FALSE(r.minimizer_set.empty());
  EXPECT_NE(std::find(r.minimizer_set.begin(), r.minimizer_set.end(), r.chosen), r.minimizer_set.end());
  const double best = *std::min_element(r.sup_stat.begin(), r.sup_stat.end());
  EXPECT_EQ(r.sup_stat[r.chosen], best);
  for (std::size_t i : r.minimizer_set) EXPECT_LE(r.sup_stat[i], best + r.epsilon + 1e-9);
}

}  // namespace

TEST(Pairwise, TwoPointTvExample) {
  auto m = two_point_model();
  auto t = pairwise_statistic(Sample({0.0, 0.0, 0.0}), m, LossSpec::tv());
  EXPECT_NEAR(t(0, 1), -1.5, 1e-14);
  EXPECT_NEAR(t(1, 0), 1.5, 1e-14);
  EXPECT_EQ(t(0, 0), 0.0);
}

TEST(Estimate, TwoPointTvChoosesP) {
  auto r = ell_estimate(Sample({0.0, 0.0, 0.0}), two_point_model(), LossSpec::tv());
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_EQ(r.sup_stat[0], 0.0);
  EXPECT_NEAR(r.sup_stat[1], 1.5, 1e-14);
  EXPECT_EQ(r.minimizer_set, std::vector<std::size_t>{0});
  expect_report_invariants(r);
}

TEST(Estimate, SingleCandidate) {
  Model m({Measure::gaussian(0.0)}, {});
  auto r = ell_estimate(Sample({1.0, 2.0}), m, LossSpec::tv());
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_EQ(r.sup_stat[0], 0.0);
}

TEST(Estimate, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(ell_estimate(Sample({0.0}), two_point_model(), LossSpec::tv(), {.epsilon = 0.0}),
               std::invalid_argument);
}

TEST(Estimate, WassersteinEmpiricalMeasureIdentity) {
  auto base = histogram_net(4, {0.5, 1.0, 1.5});
  auto sample = sample_from(Measure::uniform(0.0, 1.0), 40, 5);
  auto emp = empirical_measure(sample);
  auto model = base.with_candidate(emp);
  const std::size_t e = model.size() - 1;
  auto r = ell_estimate(sample, model, LossSpec::wasserstein(), {.epsilon = 1e-6});
  expect_report_invariants(r);
  EXPECT_NEAR(r.sup_stat[e], 0.0, 1e-10);
  EXPECT_NE(std::find(r.minimizer_set.begin(), r.minimizer_set.end(), e), r.minimizer_set.end());
  const double n = double(sample.n());
  for (std::size_t j = 0; j < e; ++j) {
    EXPECT_NEAR(r.pairwise(e, j), -(n / 2.0) * wasserstein1(emp, model.candidate(j)), 1e-10) << j;
  }
}

TEST(Histogram, CountsPerCell) {
  auto ref = ReferenceMeasure::uniform_partition(2);
  auto h = histogram_estimator(Sample({0.1, 0.2, 0.4, 0.9}), ref);
  EXPECT_EQ(h.cell_densities(), (std::vector<double>{1.5, 0.5}));
  EXPECT_THROW(histogram_estimator(Sample(), ref), std::invalid_argument);
}

TEST(Histogram, LjIdentity) {
  const int d = 4;
  auto net = histogram_net(d, {0.5, 1.0, 1.5});
  const auto& ref = *net.metadata().partition;
  auto sample = Sample({0.05, 0.1, 0.3, 0.6, 0.65, 0.7, 0.8, 0.9});
  auto ht = histogram_estimator(sample, ref);  // densities (1, 0.5, 1.5, 1)
  const double n = double(sample.n());
  for (double j : {1.5, 2.0, 3.0}) {
    auto model = net.with_candidate(ht);
    auto r = ell_estimate(sample, model, LossSpec::lj(j));
    const std::size_t h = model.size() - 1;
    EXPECT_LE(r.sup_stat[h], 1e-10) << j;
    const double rr = std::pow(double(d), 1.0 / j);
    const auto nu = ht.cell_probs();
    for (std::size_t k = 0; k < h; ++k) {
      const auto qc = model.candidate(k).cell_probs();
      double s = 0.0, norm = 0.0;
      for (int i = 0; i < d; ++i) {
        s += std::pow(std::abs(nu[i] - qc[i]), j);
        norm += std::pow(std::abs(ht.cell_densities()[i] - model.candidate(k).cell_densities()[i]), j) / d;
      }
      norm = std::pow(norm, 1.0 / j);
      if (norm == 0.0) continue;
      const double closed = -(n * std::pow(double(d), j - 1.0) / (2.0 * std::pow(norm, j - 1.0))) * s;
      EXPECT_NEAR(2.0 * std::pow(rr, j - 1.0) * r.pairwise(h, k), closed, 1e-10) << j << " " << k;
    }
  }
}

TEST(Histogram, LinfIdentity) {
  const int d = 4;
  auto net = histogram_net(d, {0.5, 1.0, 1.5});
  auto sample = Sample({0.05, 0.1, 0.3, 0.6, 0.65, 0.7, 0.8, 0.9});
  auto ht = histogram_estimator(sample, *net.metadata().partition);
  auto model = net.with_candidate(ht);
  auto r = ell_estimate(sample, model, LossSpec::linf(d));
  const std::size_t h = model.size() - 1;
  EXPECT_LE(r.sup_stat[h], 1e-10);
  const auto nu = ht.cell_probs();
  for (std::size_t k = 0; k < h; ++k) {
    const auto qc = model.candidate(k).cell_probs();
    double gap = 0.0;
    for (int i = 0; i < d; ++i) gap = std::max(gap, std::abs(nu[i] - qc[i]));
    EXPECT_NEAR(r.pairwise(h, k), -(double(sample.n()) / 2.0) * gap, 1e-12) << k;
  }
}

TEST(Median, Examples) {
  EXPECT_DOUBLE_EQ(median_tv_estimator(Sample({1.0, 2.0, 3.0, 4.0})), 2.5);
  EXPECT_DOUBLE_EQ(median_tv_estimator(Sample({5.0, 1.0, 3.0})), 4.0);
  EXPECT_THROW(median_tv_estimator(Sample({1.0})), std::invalid_argument);
}

TEST(Median, GridPointNearestMedianIsMinimizer) {
  auto model = gaussian_location_grid(1, -1.0, 1.0, 0.02);
  ScoreTable table(model, LossSpec::tv());
  const auto& thetas = model.metadata().parameters;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = sample_from(Measure::gaussian(0.1), 51, seed);
    const double med = median_tv_estimator(s);
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < thetas.size(); ++i) {
      if (std::abs(thetas[i] - med) < std::abs(thetas[nearest] - med)) nearest = i;
    }
    auto r = ell_estimate(s, table, {.epsilon = 0.5});
    EXPECT_NE(std::find(r.minimizer_set.begin(), r.minimizer_set.end(), nearest), r.minimizer_set.end()) << seed;
  }
}

TEST(Estimate, PermutationInvariance) {
  auto model = gaussian_location_grid(1, -1.0, 1.0, 0.25);
  auto s = sample_from(Measure::gaussian(0.3), 30, 2);
  auto r = ell_estimate(s, model, LossSpec::hellinger());
  expect_report_invariants(r);

  std::vector<Measure> rev(model.candidates().rbegin(), model.candidates().rend());
  auto rr = ell_estimate(s, Model(rev, {}), LossSpec::hellinger());
  const std::size_t m = model.size();
  for (std::size_t i = 0; i < m; ++i) {
    EXPECT_NEAR(rr.sup_stat[m - 1 - i], r.sup_stat[i], 1e-9);
  }

  auto pts = s.points();
  std::reverse(pts.begin(), pts.end());
  auto rs = ell_estimate(Sample(pts), model, LossSpec::hellinger());
  for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(rs.sup_stat[i], r.sup_stat[i], 1e-9);
  EXPECT_EQ(rs.chosen, r.chosen);
}

TEST(Estimate, EpsilonMonotonicity) {
  auto model = translation_grid(TranslationBase::kCauchy, -2.0, 2.0, 0.1);
  ScoreTable table(model, LossSpec::tv());
  auto s = sample_from(Measure::cauchy(0.0), 40, 8);
  std::vector<std::size_t> prev;
  for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    auto r = ell_estimate(s, table, {.epsilon = eps});
    expect_report_invariants(r);
    EXPECT_TRUE(std::includes(r.minimizer_set.begin(), r.minimizer_set.end(), prev.begin(), prev.end()));
    prev = r.minimizer_set;
  }
}

TEST(Estimate, ThreadsDoNotChangeResult) {
  auto model = gaussian_location_grid(1, -1.0, 1.0, 0.05);
  auto s = sample_from(Measure::gaussian(0.0), 60, 4);
  auto a = ell_estimate(s, model, LossSpec::tv(), {.threads = 1});
  auto b = ell_estimate(s, model, LossSpec::tv(), {.threads = 4});
  EXPECT_EQ(a.pairwise.v, b.pairwise.v);
  EXPECT_EQ(a.chosen, b.chosen);
}

TEST(Estimate, TupleModels) {
  auto model = regression_tuples({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 1.0, 2.0}}, TranslationBase::kGaussian);
  auto r = ell_estimate(Sample({0.1, 0.9, 2.2}), model, LossSpec::tv());
  expect_report_invariants(r);
  EXPECT_EQ(r.chosen, 2u);
}
