#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ellest/bounds.hpp"
#include "ellest/sim.hpp"

using namespace ellest;
namespace fs = std::filesystem;

namespace {

Scenario gaussian_scenario() {
  Scenario s;
  s.truth.base.type = MeasureSpec::Type::kGaussian;
  s.truth.base.location = 0.13;
  s.model.family = ModelBuilderConfig::Family::kGaussianLocationGrid;
  s.model.lo = -1.0;
  s.model.hi = 1.0;
  s.model.step = 0.05;
  s.loss = LossSpec::tv();
  s.n = 60;
  s.replications = 40;
  s.seed = 12;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Summary, TypeSevenQuantiles) {
  auto s = summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.q25, 1.75);
  EXPECT_DOUBLE_EQ(s.q75, 3.25);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 4.0);
}

TEST(RunEstimation, RecordShape) {
  auto s = gaussian_scenario();
  auto r = run_estimation(s);
  ASSERT_EQ(r.rows.size(), s.replications);
  EXPECT_EQ(r.candidates, 41u);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_EQ(r.rows[k].rep, k);
    EXPECT_GE(r.rows[k].loss, r.min_model_loss);
    EXPECT_GE(r.rows[k].minimizer_count, 1u);
    EXPECT_FALSE(std::isnan(r.rows[k].param));
  }
  std::vector<double> losses;
  for (const auto& row : r.rows) losses.push_back(row.loss);
  EXPECT_EQ(summarize(losses).median, r.loss_summary.median);
}

TEST(RunEstimation, DeterministicAcrossThreads) {
  auto s = gaussian_scenario();
  auto a = run_estimation(s, 1), b = run_estimation(s, 4);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].chosen, b.rows[k].chosen);
    EXPECT_EQ(a.rows[k].loss, b.rows[k].loss);
    EXPECT_EQ(a.rows[k].sup_stat, b.rows[k].sup_stat);
  }
  const fs::path dir = fs::temp_directory_path() / "ellest_sim_test";
  fs::create_directories(dir);
  write_records_csv(a, (dir / "a.csv").string());
  write_records_csv(b, (dir / "b.csv").string());
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  fs::remove_all(dir);
}

TEST(RunEstimation, SingleCandidateAlwaysChosen) {
  auto s = gaussian_scenario();
  s.model.lo = s.model.hi = 0.2;
  auto r = run_estimation(s);
  for (const auto& row : r.rows) EXPECT_EQ(row.chosen, 0u);
}

TEST(RunEstimation, EmpiricalMeasureWinsUnderWasserstein) {
  Scenario s;
  s.truth.base.type = MeasureSpec::Type::kUniform;
  s.model.family = ModelBuilderConfig::Family::kHistogramNet;
  s.model.cells = 3;
  s.model.values = {0.5, 1.0, 1.5};
  s.model.lo = 0.0;
  s.model.hi = 1.0;
  s.loss = LossSpec::wasserstein();
  s.n = 30;
  s.replications = 20;
  s.include_empirical = true;
  auto r = run_estimation(s);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.chosen, r.candidates);
    ASSERT_TRUE(row.loss_to_empirical.has_value());
    EXPECT_EQ(*row.loss_to_empirical, 0.0);
    EXPECT_TRUE(std::isnan(row.param));
  }
}

TEST(Digest, ExcludesSeed) {
  auto s = gaussian_scenario();
  auto t = s;
  t.seed = 99;
  EXPECT_EQ(scenario_digest(s), scenario_digest(t));
  EXPECT_EQ(scenario_digest(s).size(), 16u);
  t.n = 61;
  EXPECT_NE(scenario_digest(s), scenario_digest(t));
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Deviation, LargeXiGivesFullFrequency) {
  Scenario s;
  s.truth.base.type = MeasureSpec::Type::kUniform;
  s.model.family = ModelBuilderConfig::Family::kHistogramNet;
  s.model.cells = 4;
  s.model.values = {0.5, 1.0, 1.5};
  s.model.lo = 0.0;
  s.model.hi = 1.0;
  s.loss = LossSpec::wasserstein();
  s.n = 100;
  s.replications = 50;
  auto t = deviation_frequency(s, {0.5, 50.0});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1].frequency, 1.0);
  EXPECT_NEAR(t.rows[0].target, 1.0 - std::exp(-0.5), 1e-15);
  EXPECT_NEAR(t.rows[0].bound, wasserstein_bound(100.0, 0.5, 1.0, 0.0), 1e-15);
}

TEST(Rate, LogLogSlope) {
  EXPECT_NEAR(log_log_slope({100, 400, 1600}, {0.1, 0.05, 0.025}), -0.5, 1e-12);
  EXPECT_NEAR(log_log_slope({10, 20}, {1.0, 0.5}), -1.0, 1e-12);
}

TEST(Rate, HalvesAgree) {
  auto s = gaussian_scenario();
  s.replications = 200;
  auto r = run_estimation(s);
  std::vector<double> a, b;
  for (const auto& row : r.rows) (row.rep % 2 ? a : b).push_back(row.loss);
  const double ma = summarize(a).median, mb = summarize(b).median;
  EXPECT_LT(std::abs(ma - mb), 0.5 * std::max(ma, mb));
}

TEST(TestError, TruthAtPOnlyCountsChooseQ) {
  auto p = Measure::gaussian(0.0), q = Measure::gaussian(0.6);
  auto r = test_error_mc(p, p, q, LossSpec::tv(), 50, 400, 3);
  EXPECT_TRUE(r.defined);
  EXPECT_TRUE(r.p_is_closer);
  EXPECT_EQ(r.gamma, 0.0);
  EXPECT_LE(r.empirical_error, r.bound_hoeffding + 3.0 * TestErrorReport::sigma(r.bound_hoeffding, r.reps));
}

TEST(TestError, EqualCandidatesUndefined) {
  auto p = Measure::gaussian(0.0);
  auto r = test_error_mc(Measure::gaussian(0.3), p, p, LossSpec::tv(), 20, 50, 1);
  EXPECT_FALSE(r.defined);
  EXPECT_TRUE(std::isnan(r.empirical_error));
  EXPECT_EQ(r.ties, r.reps);
}

TEST(TestError, HellingerBoundsReported) {
  auto ref = ReferenceMeasure::counting({0.0, 1.0});
  auto star = Measure::from_masses(ref, {1.0, 0.0});
  auto p = Measure::from_masses(ref, {std::pow(std::cos(0.2), 2), std::pow(std::sin(0.2), 2)});
  auto q = Measure::from_masses(ref, {std::pow(std::cos(0.6), 2), std::pow(std::sin(0.6), 2)});
  auto r = test_error_mc(star, p, q, LossSpec::hellinger(), 200, 200, 4);
  ASSERT_TRUE(r.bound_hellinger.has_value());
  EXPECT_TRUE(r.bound_hellinger->applies);
  ASSERT_TRUE(r.bound_bernstein.has_value());
  EXPECT_NEAR(*r.bound_bernstein, r.bound_hellinger->bound, 1e-9 * std::max(1e-300, r.bound_hellinger->bound));
}

TEST(Agreement, CountsAddUp) {
  auto a = compare_with_devroye_lugosi(Measure::gaussian(0.2), Measure::gaussian(0.0), Measure::gaussian(1.0), 30,
                                       100, 2);
  EXPECT_EQ(a.agree + a.disagree, a.reps);
  EXPECT_GT(a.agree, 0u);
}

TEST(Writers, NumberFormat) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(kInf), "inf");
}
