#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellest/reference.hpp"
#include "ellest/rng.hpp"

namespace ellest {

// Parametric families with closed-form distances.
struct FamilyTag {
  enum class Kind { kNone, kGaussian, kCauchy, kUniformTranslation, kPowerTranslation };
  Kind kind = Kind::kNone;
  double location = 0.0;  // mean, centre, or power origin theta
  double scale = 1.0;     // sd, Cauchy scale, uniform width
  double alpha = 1.0;     // power exponent

  bool same_family(const FamilyTag& o) const {
    return kind != Kind::kNone && kind == o.kind && scale == o.scale && alpha == o.alpha;
  }
};

std::string family_name(FamilyTag::Kind kind);

// User supplied continuous law on the line.
struct CustomLaw {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;       // optional
  std::function<double(double)> quantile;  // optional
  std::vector<double> breakpoints;
  double lo = -1e300;
  double hi = 1e300;
};

// One absolutely continuous law on the line.
struct Component {
  enum class Kind { kGaussian, kCauchy, kUniform, kPower, kPiecewiseConstant, kCustom };
  Kind kind = Kind::kGaussian;
  double a = 0.0;  // gaussian mean / cauchy location / uniform lo / power theta
  double b = 1.0;  // gaussian sd / cauchy scale / uniform hi / power alpha
  std::vector<double> edges;   // piecewise constant
  std::vector<double> levels;  // Lebesgue densities per piece
  std::vector<double> cum;     // cdf at edges
  std::shared_ptr<const CustomLaw> custom;

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double u) const;
  bool has_cdf() const;
  bool cdf_is_piecewise_linear() const;
  std::vector<double> breakpoints() const;
  // Integrable density singularities as (point, substitution power).
  std::vector<std::pair<double, int>> singular_points() const;
  std::pair<double, double> support() const;
  // Interval outside which the law has negligible mass (for probe grids).
  std::pair<double, double> effective_range() const;
};

struct Atom {
  double x;
  double mass;
};

// Immutable measure with a density against its reference. Copies share state.
//
// Three layouts exist: measures on a finite reference (cell densities), laws on
// the line (weighted continuous components plus atoms), and N(m, I_d).
class Measure {
 public:
  enum class Layout { kFinite, kLine, kGaussianNd };

  // Empty handle; only valid as an assignment target.
  Measure() = default;
  bool empty() const { return impl_ == nullptr; }
  // True when both handles share the same underlying state.
  bool same_object(const Measure& o) const { return impl_ == o.impl_; }

  static Measure gaussian(double mean, double sd = 1.0);
  static Measure gaussian_nd(std::vector<double> mean);
  static Measure cauchy(double location, double scale = 1.0);
  static Measure uniform(double lo, double hi);
  // Uniform of the given width centred at theta.
  static Measure uniform_translation(double theta, double width = 1.0);
  // Density alpha (x - theta)^(alpha - 1) on (theta, theta + 1].
  static Measure power_translation(double alpha, double theta);
  // Lebesgue density `levels[i]` on [edges[i], edges[i+1]).
  static Measure piecewise_constant(std::vector<double> edges, std::vector<double> levels);
  static Measure custom(CustomLaw law);
  static Measure point_mass(double at);
  // Densities with respect to a finite reference. Signed values are allowed
  // only when allow_signed is set (L_j models).
  static Measure on_reference(const ReferenceMeasure& ref, std::vector<double> densities,
                              bool allow_signed = false);
  // Probability masses on a finite reference (densities are mass / weight).
  static Measure from_masses(const ReferenceMeasure& ref, const std::vector<double>& masses);
  // Convex combination of 1-d probability measures.
  static Measure mixture(const std::vector<std::pair<double, Measure>>& parts);

  Layout layout() const;
  const ReferenceMeasure& reference() const;
  const std::string& tag() const;
  Measure with_tag(std::string tag) const;
  const FamilyTag& family() const;
  bool is_signed() const;
  int dimension() const;

  // Density against the reference; atoms of line measures are excluded.
  double density(double x) const;
  double density(std::span<const double> x) const;
  double log_density(double x) const;

  // 1-d only. Right-continuous CDF and its left limit.
  bool has_cdf() const;
  double cdf(double x) const;
  double cdf_left(double x) const;
  bool cdf_is_piecewise_linear() const;

  // Finite layout.
  const std::vector<double>& cell_densities() const;
  std::vector<double> cell_probs() const;

  // Line layout.
  const std::vector<std::pair<double, Component>>& components() const;
  const std::vector<Atom>& atoms() const;
  double atom_mass(double x) const;
  bool has_continuous_part() const;

  // Nd layout.
  const std::vector<double>& mean() const;

  double total_mass() const;
  bool is_probability(double tol = 1e-9) const;
  std::vector<double> breakpoints() const;
  std::vector<std::pair<double, int>> singular_points() const;
  std::pair<double, double> support() const;
  std::pair<double, double> effective_range() const;

  // The same law seen as continuous components plus atoms on the line.
  Measure as_line() const;

  bool has_sampler() const;
  // Draws one observation (dimension() coordinates) into out.
  void draw(Rng& rng, double* out) const;

  struct Impl;

 private:
  explicit Measure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Observations X_1..X_n; d-dimensional points are stored row-major.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> points, int dim = 1);

  std::size_t n() const { return points_.size() / static_cast<std::size_t>(dim_); }
  int dim() const { return dim_; }
  const std::vector<double>& points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  // Sorted copy of a 1-d sample.
  std::vector<double> sorted() const;

 private:
  std::vector<double> points_;
  int dim_ = 1;
};

Sample sample_from(const Measure& m, std::size_t n, std::uint64_t seed);
Sample sample_from(const Measure& m, std::size_t n, Rng& rng);
// Independent coordinates X_i ~ marginals[i].
Sample sample_from(const std::vector<Measure>& marginals, Rng& rng);

// Right-continuous empirical distribution function.
std::function<double(double)> empirical_cdf(const Sample& sample);
// Uniform weights 1/n on the distinct sample points (counting reference).
Measure empirical_measure(const Sample& sample);

}  // namespace ellest
