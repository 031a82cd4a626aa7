#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ellest/losses.hpp"
#include "ellest/measure.hpp"
#include "ellest/models.hpp"

namespace ellest {

// Bad configuration; the message starts with the offending path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Serializable description of a measure.
struct MeasureSpec {
  enum class Type {
    kGaussian,
    kGaussianNd,
    kCauchy,
    kUniform,
    kUniformTranslation,
    kPower,
    kPointMass,
    kPiecewiseConstant,
    kDiscrete,
    kHistogram,
    kMixture
  };
  Type type = Type::kGaussian;
  double location = 0.0;  // mean, centre, theta or atom
  double scale = 1.0;     // sd, Cauchy scale, width
  double lo = 0.0;
  double hi = 1.0;
  double alpha = 0.5;
  int cells = 0;
  std::vector<double> mean;     // gaussian-nd
  std::vector<double> edges;    // piecewise-constant
  std::vector<double> levels;   // piecewise-constant / histogram densities
  std::vector<double> points;   // discrete
  std::vector<double> masses;   // discrete
  std::vector<double> weights;  // discrete reference weights / mixture weights
  std::vector<MeasureSpec> components;

  Measure build() const;
};

struct TruthSpec {
  enum class Kind { kIid, kContaminated, kTuples };
  Kind kind = Kind::kIid;
  MeasureSpec base;
  // One contamination level per observation, or a single shared level.
  std::vector<double> alphas;
  std::optional<MeasureSpec> contaminant;
  std::vector<MeasureSpec> marginals;
};

struct Scenario {
  TruthSpec truth;
  ModelBuilderConfig model;
  LossSpec loss;
  std::size_t n = 100;
  double epsilon = 1.0;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  // Appends the empirical measure of each sample to the model (W loss).
  bool include_empirical = false;
};

// The true marginals P_1*, ..., P_n*. Equal marginals share one object.
std::vector<Measure> true_marginals(const TruthSpec& truth, std::size_t n);
// A point mass far to the right of the base law's effective support.
MeasureSpec default_contaminant(const MeasureSpec& base);

nlohmann::json to_json(const MeasureSpec& m);
nlohmann::json to_json(const TruthSpec& t);
nlohmann::json to_json(const ModelBuilderConfig& c);
nlohmann::json to_json(const LossSpec& l);
// The seed is written separately (see scenario_digest).
nlohmann::json to_json(const Scenario& s);

// Parsers check types and reject unknown keys; `path` prefixes messages.
MeasureSpec measure_spec_from_json(const nlohmann::json& j, const std::string& path);
TruthSpec truth_spec_from_json(const nlohmann::json& j, const std::string& path);
ModelBuilderConfig model_config_from_json(const nlohmann::json& j, const std::string& path);
LossSpec loss_spec_from_json(const nlohmann::json& j, const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& path);

// 16 hex digits of FNV-1a over the canonical scenario document (seed excluded).
std::string scenario_digest(const Scenario& s);
std::string fnv1a_hex(const std::string& text);

}  // namespace ellest
