#pragma once

#include <optional>
#include <vector>

#include "ellest/model.hpp"
#include "ellest/scores.hpp"

namespace ellest {

// Dense row-major square matrix.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> v;

  Matrix() = default;
  explicit Matrix(std::size_t size) : n(size), v(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }
};

// Scores t_(P_i, P_j) for every unordered pair i < j of a model, built once
// and reused for any number of samples.
class ScoreTable {
 public:
  ScoreTable(const Model& model, const LossSpec& spec, int threads = 1, const ScoreOptions& opts = {});

  const Model& model() const { return model_; }
  // The loss with model-dependent parameters filled in.
  const LossSpec& loss() const { return spec_; }
  std::size_t size() const { return model_.size(); }

  // Requires i < j. Tuple models hold one score per coordinate.
  const ScoreFunction& score(std::size_t i, std::size_t j) const { return pairs_[index(i, j)].front(); }
  const std::vector<ScoreFunction>& tuple_scores(std::size_t i, std::size_t j) const {
    return pairs_[index(i, j)];
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    return i * model_.size() - i * (i + 1) / 2 + (j - i - 1);
  }
  Model model_;
  LossSpec spec_;
  std::vector<std::vector<ScoreFunction>> pairs_;
};

// T(X, P_i, P_j) for all i, j. Antisymmetric with zero diagonal, exactly.
Matrix pairwise_statistic(const Sample& sample, const ScoreTable& table, int threads = 1);
Matrix pairwise_statistic(const Sample& sample, const Model& model, const LossSpec& spec, int threads = 1);

struct EstimatorOptions {
  double epsilon = 1.0;
  int threads = 1;
  // Minimizer-set membership allows this much round-off on top of epsilon.
  double slack = 1e-9;
  bool keep_matrix = true;
};

struct EstimateReport {
  Matrix pairwise;  // empty when keep_matrix is false
  std::vector<double> sup_stat;
  double epsilon = 1.0;
  std::vector<std::size_t> minimizer_set;
  std::size_t chosen = 0;
  // Constant parts of t_(P_i, P_j) (i.i.d. models, when the matrix is kept).
  Matrix constant_parts;
  std::optional<double> attained_loss;
};

EstimateReport ell_estimate(const Sample& sample, const ScoreTable& table, const EstimatorOptions& opts = {});
EstimateReport ell_estimate(const Sample& sample, const Model& model, const LossSpec& spec,
                            const EstimatorOptions& opts = {});
// The report built from an already computed statistic matrix.
EstimateReport report_from_matrix(Matrix pairwise, const EstimatorOptions& opts);

// Histogram with cell densities D * nu_n(I) on a uniform partition.
Measure histogram_estimator(const Sample& sample, const ReferenceMeasure& partition);

// Midpoint of X_(ceil(n/2)) and X_(ceil(n/2)+1).
double median_tv_estimator(const Sample& sample);

}  // namespace ellest
