#include <gtest/gtest.h>

#include <filesystem>

#include "ellest/config.hpp"

using namespace ellest;
using nlohmann::json;

namespace {

std::string config_path(const std::string& name) { return std::string(ELLEST_CONFIG_DIR) + "/" + name; }

std::string error_of(const json& j) {
  try {
    run_config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ShippedConfigsRoundTrip) {
  for (const auto& entry : std::filesystem::directory_iterator(ELLEST_CONFIG_DIR)) {
    auto c = load_run_config(entry.path().string());
    finalize(c);
    const json once = to_json(c);
    auto again = run_config_from_json(once);
    finalize(again);
    EXPECT_EQ(to_json(again), once) << entry.path();
  }
}

TEST(Config, ScenarioDefaults) {
  auto c = load_run_config(config_path("two_point_tv.json"));
  ASSERT_TRUE(c.scenario.has_value());
  EXPECT_EQ(c.command, Command::kEstimate);
  EXPECT_EQ(c.scenario->n, 3u);
  EXPECT_EQ(c.scenario->epsilon, 1.0);
  EXPECT_EQ(c.data, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(c.output.directory, "out/two_point_tv");
}

TEST(Config, SeedPropagatesIntoScenario) {
  auto c = load_run_config(config_path("simulate_w.json"));
  EXPECT_EQ(*c.seed, 1u);
  EXPECT_EQ(c.scenario->seed, 1u);
  c.seed = 9;
  c.epsilon = 0.5;
  finalize(c);
  EXPECT_EQ(c.scenario->seed, 9u);
  EXPECT_EQ(c.scenario->epsilon, 0.5);
}

TEST(Config, UnknownKeysRejectedWithPath) {
  json j = json::parse(R"({"command": "distances", "p": {"type": "gaussian", "loc": 1}, "q": {"type": "gaussian"}})");
  const std::string e = error_of(j);
  EXPECT_NE(e.find("config.p"), std::string::npos) << e;
  EXPECT_NE(e.find("loc"), std::string::npos) << e;
}

TEST(Config, TypeErrorsNamePath) {
  json j = json::parse(R"({"command": "simulate", "seed": 1, "scenario": {
      "truth": {"measure": {"type": "gaussian"}},
      "model": {"family": "gaussian-location-grid", "lo": -1, "hi": 1, "step": "wide"},
      "loss": {"kind": "tv"}}})");
  const std::string e = error_of(j);
  EXPECT_NE(e.find("config.scenario.model.step"), std::string::npos) << e;
}

TEST(Config, SimulateNeedsSeed) {
  json j = json::parse(R"({"command": "simulate", "scenario": {
      "truth": {"measure": {"type": "gaussian"}}, "model": {"family": "gaussian-location-grid", "lo": -1, "hi": 1, "step": 0.1},
      "loss": {"kind": "tv"}, "n": 10}})");
  auto c = run_config_from_json(j);
  EXPECT_THROW(finalize(c), ConfigError);
}

TEST(Config, CommandMismatch) {
  EXPECT_THROW(load_run_config(config_path("two_point_tv.json"), Command::kSimulate), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/file.json"), ConfigError);
}

TEST(Config, BadValues) {
  EXPECT_FALSE(error_of(json::parse(R"({"command": "distances", "epsilon": 0, "p": {"type": "gaussian"},
      "q": {"type": "gaussian"}})")).empty());
  EXPECT_FALSE(error_of(json::parse(R"({"command": "check-assumptions", "loss": {"kind": "nope"}})")).empty());
  EXPECT_FALSE(error_of(json::parse(R"({"command": "frobnicate"})")).empty());
}

TEST(Config, LossFromString) {
  EXPECT_EQ(loss_spec_from_string("hellinger").kind, LossKind::kHellinger);
  EXPECT_EQ(loss_spec_from_string("lj:3").j, 3.0);
  EXPECT_EQ(loss_spec_from_string("linf:5").cells, 5);
  EXPECT_THROW(loss_spec_from_string("tv:2"), ConfigError);
  EXPECT_THROW(loss_spec_from_string("lj:x"), ConfigError);
}

TEST(Config, ContaminationDefaultsToFarPointMass) {
  auto c = load_run_config(config_path("contamination.json"));
  const auto& t = c.scenario->truth;
  ASSERT_TRUE(t.contaminant.has_value());
  EXPECT_EQ(t.contaminant->type, MeasureSpec::Type::kPointMass);
  auto marg = true_marginals(t, 4);
  EXPECT_TRUE(marg[0].same_object(marg[3]));
}
