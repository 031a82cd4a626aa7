#include <gtest/gtest.h>

#include <cmath>

#include "ellest/distances.hpp"
#include "ellest/models.hpp"
#include "ellest/numeric.hpp"

using namespace ellest;

namespace {

std::vector<double> line_breakpoints(const Measure& m) {
  auto b = m.breakpoints();
  b.push_back(-kInf);
  b.push_back(kInf);
  return b;
}

double mass_of(const Measure& m) {
  if (m.layout() == Measure::Layout::kFinite) return m.total_mass();
  return integrate_or_throw([&](double x) { return m.density(x); }, line_breakpoints(m),
                            QuadratureOptions{.singular_left = m.singular_points()});
}

}  // namespace

TEST(Models, GaussianLocationGrid) {
  auto m = gaussian_location_grid(1, -2.0, 2.0, 0.5);
  EXPECT_EQ(m.size(), 9u);
  EXPECT_EQ(*m.metadata().vc_dimension, 2.0);
  EXPECT_DOUBLE_EQ(m.metadata().parameters.front(), -2.0);
  EXPECT_DOUBLE_EQ(m.metadata().resolution, 0.5);
  auto m2 = gaussian_location_grid(2, -1.0, 1.0, 1.0);
  EXPECT_EQ(m2.size(), 9u);
  EXPECT_EQ(*m2.metadata().vc_dimension, 3.0);
  EXPECT_EQ(m2.candidate(0).dimension(), 2);
}

TEST(Models, HistogramNetEnumeration) {
  auto m = histogram_net(2, {0.2, 0.6, 1.0, 1.4, 1.8});
  ASSERT_EQ(m.size(), 5u);
  for (const auto& c : m.candidates()) {
    const auto& d = c.cell_densities();
    EXPECT_NEAR(d[0] + d[1], 2.0, 1e-12);
  }
  auto spec = resolve_loss(LossSpec::lj(2.0), m);
  EXPECT_NEAR(spec.ratio_r, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(resolve_loss(LossSpec::lj(3.0), m).ratio_r, std::cbrt(2.0), 1e-14);
  EXPECT_THROW(histogram_net(2, {0.1, 0.2}), std::invalid_argument);
}

TEST(Models, PowerTranslationClosedForm) {
  auto m = translation_grid(TranslationBase::kPower, 0.0, 1.0, 0.25, 1.0, 0.5);
  const auto& a = m.candidate(0);
  const auto& b = m.candidate(1);
  EXPECT_EQ(a.family().kind, FamilyTag::Kind::kPowerTranslation);
  EXPECT_TRUE(closed_form_tv(a, b).has_value());
  EXPECT_NEAR(tv_distance(a, b, DistanceMethod::kClosedForm), 0.5, 1e-14);
  EXPECT_NEAR(tv_distance(a, b, DistanceMethod::kQuadrature), 0.5, 1e-6);
  EXPECT_THROW(translation_grid(TranslationBase::kPower, 0.0, 1.0, 0.25, 1.0, 1.5), std::invalid_argument);
}

TEST(Models, ClosedFormTagsAgreeWithQuadrature) {
  for (auto base : {TranslationBase::kGaussian, TranslationBase::kCauchy, TranslationBase::kUniform,
                    TranslationBase::kPower}) {
    auto m = translation_grid(base, -0.6, 0.6, 0.3, 1.0, 0.5);
    for (std::size_t i = 0; i + 1 < m.size(); i += 2) {
      const auto& a = m.candidate(i);
      const auto& b = m.candidate(m.size() - 1 - i);
      EXPECT_NEAR(tv_distance(a, b, DistanceMethod::kClosedForm), tv_distance(a, b, DistanceMethod::kQuadrature), 1e-6)
          << to_string(base);
    }
  }
}

TEST(Models, ProbabilityCandidatesIntegrateToOne) {
  for (const auto& m : {translation_grid(TranslationBase::kCauchy, -1.0, 1.0, 1.0),
                        translation_grid(TranslationBase::kPower, -1.0, 1.0, 1.0, 1.0, 0.3),
                        histogram_net(3, {0.5, 1.0, 1.5}),
                        monotone_net(2, {0.0, 0.5, 1.0, 2.0}, {1.0, 2.0, 4.0})}) {
    for (const auto& c : m.candidates()) {
      // Mass within one ulp of a nonzero power singularity is ulp^alpha and invisible to pointwise evaluation.
      const double theta = c.family().location;
      const double tol = c.family().kind == FamilyTag::Kind::kPowerTranslation && theta != 0.0
                             ? 2.0 * std::pow(std::nextafter(std::abs(theta), kInf) - std::abs(theta), 0.3)
                             : 1e-7;
      EXPECT_NEAR(mass_of(c), 1.0, tol) << m.metadata().family;
    }
  }
}

TEST(Models, MonotoneNetShape) {
  auto m = monotone_net(3, {0.0, 0.25, 0.5, 1.0, 2.0}, {1.0, 2.0, 3.0});
  EXPECT_EQ(*m.metadata().vc_dimension, 6.0);
  ASSERT_GT(m.size(), 1u);
  for (const auto& c : m.candidates()) {
    const auto& comps = c.components();
    ASSERT_EQ(comps.size(), 1u);
    const auto& levels = comps.front().second.levels;
    EXPECT_LE(levels.size(), 3u);
    for (std::size_t i = 1; i < levels.size(); ++i) EXPECT_LE(levels[i], levels[i - 1]);
    for (double v : levels) EXPECT_GE(v, 0.0);
  }
}

TEST(Models, L2IndicatorBasis) {
  L2Basis basis{.cells = 4};
  auto g = l2_inner_products(basis);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) EXPECT_NEAR(g.gram[a][b], a == b ? 1.0 : 0.0, 1e-14);
  }
  EXPECT_NEAR(g.ratio_r, 2.0, 1e-12);
  const std::vector<double> c = {0.5, 0.3, 0.1, 0.1};
  EXPECT_EQ(g.distance(c, c), 0.0);
}

TEST(Models, L2CoefficientNormMatchesCells) {
  L2Basis basis{.cells = 3, .functions = {{1.0, 1.0, 1.0}, {1.0, 0.0, -1.0}}};
  auto g = l2_inner_products(basis);
  Rng rng(5, 0);
  std::vector<std::vector<double>> coefs;
  for (int k = 0; k < 10; ++k) coefs.push_back({1.0, rng.uniform() - 0.5});
  auto m = l2_linear(basis, coefs);
  EXPECT_NEAR(*m.metadata().ratio_r, g.ratio_r, 1e-14);
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      EXPECT_NEAR(g.distance(coefs[a], coefs[b]), lj_distance(m.candidate(a), m.candidate(b), 2.0), 1e-9);
    }
  }
}

TEST(Models, RegressionTuples) {
  auto m = regression_tuples({{0.0, 1.0, 2.0}, {0.5, 0.5, 0.5}}, TranslationBase::kCauchy);
  EXPECT_TRUE(m.is_tuple_form());
  EXPECT_EQ(m.tuple_length(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(m.tuple(0)[k].family().kind, FamilyTag::Kind::kCauchy);
    EXPECT_DOUBLE_EQ(m.tuple(0)[k].family().location, double(k));
  }
  EXPECT_THROW(regression_tuples({{0.0, 1.0}, {0.5}}, TranslationBase::kCauchy), std::invalid_argument);
}

TEST(Models, KlBoundStoredAtResolution) {
  auto m = discrete_model({0, 1}, {{0.6, 0.4}, {0.4, 0.6}});
  LossSpec kl;
  kl.kind = LossKind::kKl;
  EXPECT_NEAR(resolve_loss(kl, m).kl_a, std::log(1.5), 1e-12);
}

TEST(Models, BuilderDispatch) {
  ModelBuilderConfig c;
  c.family = ModelBuilderConfig::Family::kTranslationGrid;
  c.base = TranslationBase::kUniform;
  c.lo = -0.5;
  c.hi = 0.5;
  c.step = 0.25;
  EXPECT_EQ(build(c).size(), 5u);
  auto s = c.scaled(0.5);
  EXPECT_DOUBLE_EQ(s.lo, -0.25);
  EXPECT_DOUBLE_EQ(s.step, 0.125);
  EXPECT_EQ(build(s).size(), 5u);
  c.step = -1.0;
  EXPECT_THROW(build(c), std::invalid_argument);
}
