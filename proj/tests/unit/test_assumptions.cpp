#include <gtest/gtest.h>

#include <cmath>

#include "ellest/assumptions.hpp"
#include "ellest/models.hpp"

using namespace ellest;

namespace {

Model five_point_model() {
  return discrete_model({0, 1, 2, 3, 4}, {{0.1, 0.2, 0.3, 0.2, 0.2}, {0.3, 0.3, 0.1, 0.2, 0.1}, {0.2, 0.1, 0.1, 0.1, 0.5}});
}

std::vector<Measure> probes(const Model& m) {
  const auto& ref = m.candidate(0).reference();
  return {Measure::from_masses(ref, {0.2, 0.2, 0.2, 0.2, 0.2}), Measure::from_masses(ref, {0.9, 0.025, 0.025, 0.025, 0.025})};
}

}  // namespace

TEST(Assumption1, HoldsForEachFamily) {
  auto m = five_point_model();
  for (const auto& spec : {LossSpec::tv(), LossSpec::hellinger(), LossSpec{LossSpec::kl(1.0)}, LossSpec::lj(1.5),
                           LossSpec::lj(3.0)}) {
    LossSpec s = spec;
    if (s.kind == LossKind::kKl) s.kl_a = 0.0;
    auto r = check_assumption1_exact(resolve_loss(s, m), m, probes(m));
    EXPECT_TRUE(r.pass) << s.name() << ": " << r.offending;
    EXPECT_GE(r.worst_slack, -1e-12);
    EXPECT_GT(r.triples, 0u);
  }
}

TEST(Assumption1, LinfOnPartition) {
  auto ref = ReferenceMeasure::uniform_partition(4);
  Model m({Measure::from_masses(ref, {0.1, 0.2, 0.3, 0.4}), Measure::from_masses(ref, {0.4, 0.3, 0.2, 0.1}),
           Measure::from_masses(ref, {0.25, 0.25, 0.25, 0.25})},
          {});
  auto r = check_assumption1_exact(resolve_loss(LossSpec::linf(4), m), m, {});
  EXPECT_TRUE(r.pass) << r.offending;
}

TEST(Assumption1, ProbeEqualToCandidate) {
  // With S = P the bound reads E_P t <= -a1 l(P,Q) <= 0.
  auto m = five_point_model();
  auto t = tv_score(m.candidate(0), m.candidate(1));
  const auto& ref = m.candidate(0).reference();
  double e = 0.0;
  const auto probs = m.candidate(0).cell_probs();
  for (int i = 0; i < ref.cells(); ++i) e += probs[i] * t(ref.points()[i]);
  EXPECT_LE(e, -0.5 * tv_distance(m.candidate(0), m.candidate(1)) + 1e-12);
}

TEST(Assumption1, KlWithTooSmallBoundFails) {
  auto m = discrete_model({0, 1}, {{0.9, 0.1}, {0.1, 0.9}});
  // |log(p/q)| = log 9 here; a = 0.5 is far too small.
  auto r = check_assumption1_exact(LossSpec::kl(0.5), m, {});
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.offending.empty());
}

TEST(Assumption2, HellingerAndKl) {
  auto m = five_point_model();
  auto r = check_assumption2_exact(LossSpec::hellinger(), 1.5, m, probes(m));
  EXPECT_TRUE(r.pass) << r.offending;
  LossSpec kl = LossSpec::kl(1.0);
  kl.kl_a = 0.0;
  kl = resolve_loss(kl, m);
  auto rk = check_assumption2_exact(kl, 1.0 / (kl.kl_a * std::min(2.0, kl.kl_a)), m, probes(m));
  EXPECT_TRUE(rk.pass) << rk.offending;
}

TEST(Cond3bis, TranslationFamiliesHaveZeroConstant) {
  auto uni = translation_grid(TranslationBase::kUniform, -1.0, 1.0, 0.25);
  auto r = check_cond3bis(uni);
  EXPECT_NEAR(r.a2_prime, 0.0, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.a2, 1.0, 1e-12);
  auto pow = translation_grid(TranslationBase::kPower, -1.0, 1.0, 0.25, 1.0, 0.5);
  EXPECT_NEAR(check_cond3bis(pow).a2_prime, 0.0, 1e-9);
}

TEST(Cond3bis, GaussianFamilyIsLarge) {
  auto g = gaussian_location_grid(1, -1.0, 1.0, 0.5);
  auto r = check_cond3bis(g);
  EXPECT_GT(r.a2_prime, 1.0);
  EXPECT_FALSE(r.pass);
}

TEST(C1, HandEvaluation) {
  const double l4 = std::log(4.0), l2 = std::log(2.0);
  EXPECT_NEAR(c1_constant(0.5, 1.5), 0.25 / (2.0 * (1.0 + l4) + 4.0 * 0.5 / 1.5 + 16.0 * 1.5 * l2 / 0.5), 1e-15);
  EXPECT_NEAR(c1_constant(0.5, 1.5), 0.006349, 1e-6);
  EXPECT_NEAR(c1_constant(1.0, 1.0), 0.5 / (2.0 * (1.0 + l4) + 4.0 + 16.0 * l2), 1e-15);
  EXPECT_NEAR(c1_constant(1.0, 1.0), 0.025172, 1e-6);
  EXPECT_NEAR(c1_constant(3.0 * 0.7, 3.0 * 1.9), 3.0 * c1_constant(0.7, 1.9), 1e-14);
  EXPECT_THROW(c1_constant(0.0, 1.0), std::invalid_argument);
}

TEST(Suite, SmallRandomRun) {
  auto r = random_assumption_suite(LossSpec::hellinger(), 20, 5, 1);
  EXPECT_EQ(r.spaces, 20u);
  EXPECT_TRUE(r.assumption1.pass);
  EXPECT_TRUE(r.assumption2_checked);
  EXPECT_TRUE(r.assumption2.pass);
}
