#pragma once

#include <string>
#include <vector>

namespace ellest {

// The dominating measure mu against which densities are taken.
class ReferenceMeasure {
 public:
  enum class Kind { kLebesgue, kLebesgueNd, kUniformPartition, kDiscrete };

  static ReferenceMeasure lebesgue();
  static ReferenceMeasure lebesgue_nd(int dimension);
  // D equal cells on [lo, hi), each carrying reference mass 1/D.
  static ReferenceMeasure uniform_partition(int cells, double lo = 0.0, double hi = 1.0);
  // Finitely many distinct points with strictly positive weights.
  static ReferenceMeasure discrete(std::vector<double> points, std::vector<double> weights);
  static ReferenceMeasure counting(std::vector<double> points);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kUniformPartition || kind_ == Kind::kDiscrete; }
  int dimension() const { return dimension_; }
  // Number of cells (partition) or points (discrete); 0 otherwise.
  int cells() const { return static_cast<int>(weights_.size()); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int cell) const { return weights_[static_cast<std::size_t>(cell)]; }
  // Cell edges of a partition (D+1 values).
  std::vector<double> edges() const;
  // Index of the cell (or point) containing x, -1 if none.
  int cell_of(double x) const;
  // All weights equal, as required by the sup-norm histogram machinery.
  bool has_equal_weights() const;

  bool operator==(const ReferenceMeasure& other) const;
  bool operator!=(const ReferenceMeasure& other) const { return !(*this == other); }
  std::string describe() const;

 private:
  Kind kind_ = Kind::kLebesgue;
  int dimension_ = 1;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<int> order_;  // points_ indices sorted by location
};

}  // namespace ellest
