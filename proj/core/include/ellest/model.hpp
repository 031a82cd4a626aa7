#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellest/losses.hpp"
#include "ellest/measure.hpp"

namespace ellest {

enum class ProductForm { kIid, kTuples };

struct ModelMetadata {
  std::string family;
  std::optional<double> vc_dimension;
  // Bound on ||p - q||_inf / ||p - q||_j over model pairs (L_j losses).
  std::optional<double> ratio_r;
  // Bound on |log(p/q)| over model pairs (KL loss).
  std::optional<double> kl_a;
  std::optional<ReferenceMeasure> partition;
  ProductForm product_form = ProductForm::kIid;
  // Grid step or net resolution, reported next to results.
  double resolution = 0.0;
  // One scalar parameter per candidate when the family is indexed by one
  // (location, theta). Empty otherwise.
  std::vector<double> parameters;
};

// A finite indexed family of candidates. In the tuple form candidate i is a
// vector of n marginals.
class Model {
 public:
  Model(std::vector<Measure> candidates, ModelMetadata meta);
  static Model from_tuples(std::vector<std::vector<Measure>> tuples, ModelMetadata meta);

  std::size_t size() const { return is_tuple_form() ? tuples_.size() : candidates_.size(); }
  bool is_tuple_form() const { return meta_.product_form == ProductForm::kTuples; }
  const Measure& candidate(std::size_t i) const { return candidates_.at(i); }
  const std::vector<Measure>& candidates() const { return candidates_; }
  const std::vector<Measure>& tuple(std::size_t i) const { return tuples_.at(i); }
  // Length of every tuple (0 for i.i.d. models).
  std::size_t tuple_length() const { return tuples_.empty() ? 0 : tuples_.front().size(); }
  const ModelMetadata& metadata() const { return meta_; }
  ModelMetadata& metadata() { return meta_; }

  // Copy with one more i.i.d. candidate appended (parameter NaN if indexed).
  Model with_candidate(const Measure& extra) const;

 private:
  Model() = default;
  std::vector<Measure> candidates_;
  std::vector<std::vector<Measure>> tuples_;
  ModelMetadata meta_;
};

// Max over model pairs of |log(p/q)| on probe grids (+inf if some pair is
// not mutually dominated).
double kl_log_ratio_bound(const Model& model);
// Max over model pairs of ||p-q||_inf / ||p-q||_j.
double lj_ratio_bound(const Model& model, double j);

// Fills model-dependent loss parameters: R for L_j (metadata, D^(1/j) on a
// partition, or computed from the pairs), a for KL, D for L_inf.
LossSpec resolve_loss(const LossSpec& spec, const Model& model);

}  // namespace ellest
