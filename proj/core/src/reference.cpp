#include "ellest/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ellest {

ReferenceMeasure ReferenceMeasure::lebesgue() { return ReferenceMeasure{}; }

ReferenceMeasure ReferenceMeasure::lebesgue_nd(int dimension) {
  if (dimension < 1) throw std::invalid_argument("lebesgue_nd: dimension must be >= 1");
  ReferenceMeasure r;
  r.kind_ = dimension == 1 ? Kind::kLebesgue : Kind::kLebesgueNd;
  r.dimension_ = dimension;
  return r;
}

ReferenceMeasure ReferenceMeasure::uniform_partition(int cells, double lo, double hi) {
  if (cells < 2) throw std::invalid_argument("uniform_partition: need D >= 2 cells");
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw std::invalid_argument("uniform_partition: support must be a finite interval lo < hi");
  }
  ReferenceMeasure r;
  r.kind_ = Kind::kUniformPartition;
  r.lo_ = lo;
  r.hi_ = hi;
  r.weights_.assign(static_cast<std::size_t>(cells), 1.0 / cells);
  return r;
}

ReferenceMeasure ReferenceMeasure::discrete(std::vector<double> points, std::vector<double> weights) {
  if (points.empty()) throw std::invalid_argument("discrete reference: empty point set");
  if (points.size() != weights.size()) {
    throw std::invalid_argument("discrete reference: points and weights differ in length");
  }
  for (double w : weights) {
    if (!(w > 0.0 && std::isfinite(w))) {
      throw std::invalid_argument("discrete reference: weights must be positive and finite");
    }
  }
  ReferenceMeasure r;
  r.kind_ = Kind::kDiscrete;
  r.points_ = std::move(points);
  r.weights_ = std::move(weights);
  r.order_.resize(r.points_.size());
  std::iota(r.order_.begin(), r.order_.end(), 0);
  std::sort(r.order_.begin(), r.order_.end(),
            [&r](int a, int b) { return r.points_[a] < r.points_[b]; });
  for (std::size_t i = 1; i < r.order_.size(); ++i) {
    if (r.points_[r.order_[i]] == r.points_[r.order_[i - 1]]) {
      throw std::invalid_argument("discrete reference: duplicate points");
    }
  }
  r.lo_ = r.points_[r.order_.front()];
  r.hi_ = r.points_[r.order_.back()];
  return r;
}

ReferenceMeasure ReferenceMeasure::counting(std::vector<double> points) {
  std::vector<double> w(points.size(), 1.0);
  return discrete(std::move(points), std::move(w));
}

std::vector<double> ReferenceMeasure::edges() const {
  std::vector<double> e;
  if (kind_ != Kind::kUniformPartition) return e;
  const int d = cells();
  for (int i = 0; i <= d; ++i) e.push_back(lo_ + (hi_ - lo_) * i / d);
  e.back() = hi_;
  return e;
}

int ReferenceMeasure::cell_of(double x) const {
  if (kind_ == Kind::kUniformPartition) {
    if (!(x >= lo_ && x < hi_)) return -1;
    const int d = cells();
    int k = static_cast<int>(std::floor((x - lo_) / (hi_ - lo_) * d));
    return std::clamp(k, 0, d - 1);
  }
  if (kind_ == Kind::kDiscrete) {
    auto it = std::lower_bound(order_.begin(), order_.end(), x,
                               [this](int idx, double v) { return points_[idx] < v; });
    if (it != order_.end() && points_[*it] == x) return *it;
    return -1;
  }
  return -1;
}

bool ReferenceMeasure::has_equal_weights() const {
  if (weights_.empty()) return false;
  return std::all_of(weights_.begin(), weights_.end(),
                     [this](double w) { return w == weights_.front(); });
}

bool ReferenceMeasure::operator==(const ReferenceMeasure& o) const {
  return kind_ == o.kind_ && dimension_ == o.dimension_ && lo_ == o.lo_ && hi_ == o.hi_ &&
         points_ == o.points_ && weights_ == o.weights_;
}

std::string ReferenceMeasure::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kLebesgue: os << "lebesgue-1d"; break;
    case Kind::kLebesgueNd: os << "lebesgue-" << dimension_ << "d"; break;
    case Kind::kUniformPartition:
      os << "uniform-partition(D=" << cells() << ", [" << lo_ << "," << hi_ << "))";
      break;
    case Kind::kDiscrete: os << "discrete(" << cells() << " points)"; break;
  }
  return os.str();
}

}  // namespace ellest
