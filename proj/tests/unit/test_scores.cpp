#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ellest/distances.hpp"
#include "ellest/model.hpp"
#include "ellest/scores.hpp"

using namespace ellest;

namespace {

ReferenceMeasure pair_space() { return ReferenceMeasure::counting({0.0, 1.0}); }

void expect_antisymmetric_and_bounded(const ScoreFunction& pq, const ScoreFunction& qp,
                                      const std::vector<double>& probes, const std::string& what) {
  double lo = kInf, hi = -kInf;
  for (double x : probes) {
    EXPECT_NEAR(pq(x), -qp(x), 1e-12) << what << " at " << x;
    lo = std::min(lo, pq(x));
    hi = std::max(hi, pq(x));
  }
  EXPECT_LE(hi - lo, 1.0 + 1e-12) << what;
}

}  // namespace

TEST(TvScore, TwoPointSpace) {
  auto p = Measure::from_masses(pair_space(), {0.9, 0.1});
  auto q = Measure::from_masses(pair_space(), {0.1, 0.9});
  auto t = tv_score(p, q);
  EXPECT_NEAR(t(0.0), -0.5, 1e-15);
  EXPECT_NEAR(t(1.0), 0.5, 1e-15);
  EXPECT_EQ(t.constants().a0, 1.5);
  EXPECT_EQ(t.constants().a1, 0.5);
}

TEST(TvScore, EqualMeasuresGiveZero) {
  auto p = Measure::gaussian(0.2);
  auto t = tv_score(p, p);
  for (double x : {-3.0, 0.0, 0.2, 5.0}) EXPECT_EQ(t(x), 0.0);
}

TEST(TvScore, MatchesVariationalForm) {
  auto p = Measure::gaussian(0.0), q = Measure::cauchy(0.7, 1.3);
  auto t = tv_score(p, q);
  auto v = variational_score(p, q, tv_witness(p, q), 1.0, tv_witness_breakpoints(p, q));
  for (double x : linspace(-8.0, 8.0, 401)) EXPECT_NEAR(t(x), v(x), 1e-7) << x;
  EXPECT_EQ(v.constants().a0, 1.5);
  EXPECT_EQ(v.constants().a1, 0.5);
}

TEST(VariationalScore, CentredAtMidpoint) {
  auto p = Measure::gaussian(0.0), q = Measure::gaussian(1.0);
  auto t = variational_score(p, q, [](double x) { return 0.5 * std::tanh(x); }, 1.0);
  auto mid = Measure::mixture({{0.5, p}, {0.5, q}});
  EXPECT_NEAR(expectation(mid, [&](double x) { return t(x); }), 0.0, 1e-8);
  auto z = variational_score(p, p, [](double) { return 0.0; }, 1.0);
  EXPECT_EQ(z(0.3), 0.0);
}

TEST(VariationalScore, RejectsOscillationAboveB) {
  auto p = Measure::gaussian(0.0), q = Measure::gaussian(1.0);
  EXPECT_THROW(variational_score(p, q, [](double x) { return std::tanh(x); }, 1.0), std::invalid_argument);
}

TEST(WassersteinScore, PointMasses) {
  auto p = Measure::point_mass(0.2), q = Measure::point_mass(0.8);
  auto t = wasserstein_score(p, q);
  // sgn(F_Q - F_P) = -1 on (0.2, 0.8): data near P favours P.
  EXPECT_NEAR(t(0.0), -0.3, 1e-14);
  EXPECT_NEAR(t(1.0), 0.3, 1e-14);
  EXPECT_NEAR(wasserstein_score(p, p)(0.5), 0.0, 1e-15);
}

TEST(WassersteinScore, MatchesVariationalForm) {
  auto p = Measure::uniform(0.0, 1.0), q = Measure::piecewise_constant({0.0, 0.3, 1.0}, {2.0, 0.4 / 0.7});
  auto t = wasserstein_score(p, q);
  auto v = variational_score(p, q, wasserstein_witness(p, q), 1.0, wasserstein_witness_breakpoints(p, q));
  for (double x : linspace(0.0, 1.0, 201)) EXPECT_NEAR(t(x), v(x), 1e-7) << x;
}

TEST(LjScore, TwoCellExample) {
  auto ref = ReferenceMeasure::uniform_partition(2);
  auto p = Measure::on_reference(ref, {1.6, 0.4}), q = Measure::on_reference(ref, {0.4, 1.6});
  auto t = lj_score(p, q, 2.0, std::sqrt(2.0));
  EXPECT_NEAR(t.constant_part(), 0.0, 1e-15);
  EXPECT_NEAR(t(0.25), -1.0 / (2.0 * std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(t(0.75), 1.0 / (2.0 * std::sqrt(2.0)), 1e-14);
  EXPECT_EQ(lj_score(p, p, 2.0, std::sqrt(2.0))(0.25), 0.0);
  EXPECT_NEAR(t.constants().a0, 3.0 / (4.0 * std::sqrt(2.0)), 1e-15);
}

TEST(LjScore, RatioBoundChecked) {
  auto ref = ReferenceMeasure::uniform_partition(4);
  auto p = Measure::on_reference(ref, {4.0, 0.0, 0.0, 0.0}), q = Measure::on_reference(ref, {1.0, 1.0, 1.0, 1.0});
  EXPECT_THROW(lj_score(p, q, 2.0, 1.0), std::invalid_argument);
}

// 4||p-q||_inf T = [2 sum q(X_i) - n||q||^2] - [2 sum p(X_i) - n||p||^2].
TEST(LjScore, L2ContrastIdentity) {
  Rng rng(17, 0);
  const int d = 6;
  auto ref = ReferenceMeasure::uniform_partition(d);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pv(d), qv(d);
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < d; ++i) {
      sp += (pv[i] = rng.uniform());
      sq += (qv[i] = rng.uniform());
    }
    for (int i = 0; i < d; ++i) {
      pv[i] *= d / sp;
      qv[i] *= d / sq;
    }
    auto p = Measure::on_reference(ref, pv), q = Measure::on_reference(ref, qv);
    const double sup = lj_distance(p, q, kInf), l2 = lj_distance(p, q, 2.0);
    auto t = lj_score(p, q, 2.0, sup / l2);
    std::vector<double> xs(25);
    for (auto& x : xs) x = rng.uniform();
    double stat = 0.0, sum_p = 0.0, sum_q = 0.0, np2 = 0.0, nq2 = 0.0;
    for (double x : xs) {
      stat += t(x);
      sum_p += p.density(x);
      sum_q += q.density(x);
    }
    for (int i = 0; i < d; ++i) {
      np2 += pv[i] * pv[i] / d;
      nq2 += qv[i] * qv[i] / d;
    }
    const double n = double(xs.size());
    EXPECT_NEAR(4.0 * sup * stat, (2.0 * sum_q - n * nq2) - (2.0 * sum_p - n * np2), 1e-10);
  }
}

TEST(LinfScore, TwoCellExample) {
  auto ref = ReferenceMeasure::uniform_partition(2);
  auto p = Measure::from_masses(ref, {0.8, 0.2}), q = Measure::from_masses(ref, {0.2, 0.8});
  auto t = linf_score(p, q);
  EXPECT_NEAR(t(0.25), -0.5, 1e-15);
  EXPECT_NEAR(t(0.75), 0.5, 1e-15);
  EXPECT_EQ(linf_score(p, p)(0.25), 0.0);
  EXPECT_NEAR(t.constants().a0, 0.75, 1e-15);
  EXPECT_NEAR(t.constants().a1, 0.25, 1e-15);
  EXPECT_EQ(t.constants().b, 2.0);
}

TEST(LinfScore, MismatchedPartitionsRejected) {
  auto p = Measure::from_masses(ReferenceMeasure::uniform_partition(2), {0.5, 0.5});
  auto q = Measure::from_masses(ReferenceMeasure::uniform_partition(3), {0.2, 0.3, 0.5});
  EXPECT_THROW(linf_score(p, q), std::invalid_argument);
}

TEST(HellingerScore, SingularTwoPoints) {
  auto p = Measure::from_masses(pair_space(), {1.0, 0.0}), q = Measure::from_masses(pair_space(), {0.0, 1.0});
  auto t = hellinger_score(p, q);
  EXPECT_NEAR(t(0.0), -0.5, 1e-14);
  EXPECT_NEAR(t(1.0), 0.5, 1e-14);
  EXPECT_EQ(hellinger_score(p, p)(0.0), 0.0);
  EXPECT_NEAR(t.constants().a0, (std::sqrt(2.0) + 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(t.constants().a1, (std::sqrt(2.0) - 1.0) / 2.0, 1e-15);
  EXPECT_EQ(*t.constants().a2, 1.5);
}

TEST(KlScore, LikelihoodRatio) {
  auto p = Measure::from_masses(pair_space(), {0.6, 0.4}), q = Measure::from_masses(pair_space(), {0.4, 0.6});
  const double a = std::log(1.5);
  auto t = kl_score(p, q, a);
  EXPECT_NEAR(t(0.0), -0.5, 1e-14);
  EXPECT_NEAR(t(1.0), 0.5, 1e-14);
  EXPECT_EQ(kl_score(p, p, a)(0.0), 0.0);
  EXPECT_NEAR(t.constants().a0, 1.0 / (2.0 * a), 1e-14);
  EXPECT_NEAR(*t.constants().a2, 1.0 / (a * std::min(2.0, a)), 1e-14);
  EXPECT_THROW(kl_score(p, q, 0.1), std::invalid_argument);
}

TEST(Scores, AntisymmetryAndOscillationOnLine) {
  auto p = Measure::gaussian(0.0), q = Measure::gaussian(0.8, 1.5);
  auto probes = probe_grid(p, q, 2048);
  expect_antisymmetric_and_bounded(tv_score(p, q), tv_score(q, p), probes, "tv");
  expect_antisymmetric_and_bounded(hellinger_score(p, q), hellinger_score(q, p), probes, "hellinger");

  auto c = Measure::cauchy(0.0), d = Measure::cauchy(1.0);
  probes = probe_grid(c, d, 2048);
  expect_antisymmetric_and_bounded(tv_score(c, d), tv_score(d, c), probes, "tv cauchy");
  expect_antisymmetric_and_bounded(hellinger_score(c, d), hellinger_score(d, c), probes, "hellinger cauchy");

  auto u = Measure::uniform(0.0, 1.0), w = Measure::piecewise_constant({0.0, 0.5, 1.0}, {1.5, 0.5});
  expect_antisymmetric_and_bounded(wasserstein_score(u, w), wasserstein_score(w, u), linspace(0.0, 1.0, 513), "w");
}

TEST(Scores, AntisymmetryOnRandomHistograms) {
  Rng rng(3, 1);
  const int d = 5;
  auto ref = ReferenceMeasure::uniform_partition(d);
  auto draw = [&] {
    std::vector<double> m(d);
    double s = 0.0;
    for (auto& x : m) s += (x = rng.uniform() + 0.05);
    for (auto& x : m) x /= s;
    return Measure::from_masses(ref, m);
  };
  const auto probes = linspace(0.05, 0.95, 5);
  for (int k = 0; k < 100; ++k) {
    auto p = draw(), q = draw();
    const double a = std::max(kl_log_ratio_bound(Model({p, q}, {})), 1e-3);
    const double r = lj_distance(p, q, kInf) / lj_distance(p, q, 3.0);
    expect_antisymmetric_and_bounded(tv_score(p, q), tv_score(q, p), probes, "tv");
    expect_antisymmetric_and_bounded(hellinger_score(p, q), hellinger_score(q, p), probes, "hellinger");
    expect_antisymmetric_and_bounded(kl_score(p, q, a), kl_score(q, p, a), probes, "kl");
    expect_antisymmetric_and_bounded(lj_score(p, q, 3.0, r), lj_score(q, p, 3.0, r), probes, "lj");
    expect_antisymmetric_and_bounded(linf_score(p, q), linf_score(q, p), probes, "linf");
  }
}

TEST(FamilyConstants, PerLoss) {
  auto lj = family_constants(LossSpec::lj(3.0, 2.0));
  EXPECT_NEAR(lj.a0, 3.0 / 16.0, 1e-15);
  EXPECT_NEAR(lj.a1, 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(lj.b, 8.0, 1e-15);
  auto w = family_constants(LossSpec::wasserstein());
  EXPECT_EQ(w.a0, 1.5);
  EXPECT_EQ(w.a1, 0.5);
  auto kl = family_constants(LossSpec::kl(3.0));
  EXPECT_NEAR(*kl.a2, 1.0 / 6.0, 1e-15);
}

TEST(ScoreFunction, SumSortedMatchesPointwise) {
  auto p = Measure::uniform_translation(0.0), q = Measure::uniform_translation(0.3);
  auto t = tv_score(p, q);
  EXPECT_TRUE(t.has_interval_form());
  std::vector<double> xs = {-0.6, -0.5, -0.2, 0.2, 0.5, 0.65, 0.8, 0.9};
  double direct = 0.0;
  for (double x : xs) direct += t(x);
  EXPECT_NEAR(t.sum_sorted(xs), direct, 1e-12);
  EXPECT_NEAR(t.negated().sum_sorted(xs), -direct, 1e-12);
}
