#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellest/model.hpp"

namespace ellest {

enum class TranslationBase { kGaussian, kCauchy, kUniform, kPower };
std::string to_string(TranslationBase b);
TranslationBase translation_base_from_string(const std::string& s);

// The base law shifted to location theta: N(theta, s^2), Cauchy(theta, s),
// uniform of width s centred at theta, or the power density on (theta, theta+1].
Measure translated(TranslationBase base, double theta, double scale = 1.0, double alpha = 0.5);

// Inclusive grid lo, lo + step, ... <= hi (+ rounding slack).
std::vector<double> grid(double lo, double hi, double step);

// N(m, I_d) with every coordinate of m on the grid. V = d + 1.
Model gaussian_location_grid(int d, double lo, double hi, double step);

// Translates of one base law over a theta grid. V = 2.
Model translation_grid(TranslationBase base, double lo, double hi, double step, double scale = 1.0,
                       double alpha = 0.5);

// All histograms on D equal cells of [lo, hi) whose cell densities (against
// the partition reference, each cell of mass 1/D) come from `values` and
// average to 1.
Model histogram_net(int cells, const std::vector<double>& values, double lo = 0.0, double hi = 1.0);

// Non-increasing densities with at most `max_pieces` constant pieces, piece
// ends on `breakpoints` and relative levels from `levels`, normalised.
// Duplicates are removed and at most `max_candidates` are kept. V = 2d.
Model monotone_net(int max_pieces, const std::vector<double>& breakpoints,
                   const std::vector<double>& levels, std::size_t max_candidates = 5000);

// Linear span of a basis on a uniform partition, candidates sum_k c_k phi_k.
struct L2Basis {
  int cells = 2;
  double lo = 0.0;
  double hi = 1.0;
  // Empty: the orthonormal indicator basis sqrt(D) 1_I. Otherwise one vector
  // of cell values per basis function.
  std::vector<std::vector<double>> functions;
};
Model l2_linear(const L2Basis& basis, const std::vector<std::vector<double>>& coefficients);

struct GramData {
  std::vector<std::vector<double>> gram;  // <phi_a, phi_b>
  double ratio_r = 0.0;                   // sup_x sqrt(phi(x)' G^-1 phi(x))
  // ||sum (a_k - b_k) phi_k||_2 from coefficients.
  double distance(const std::vector<double>& a, const std::vector<double>& b) const;
  double inner(const std::vector<double>& a, const std::vector<double>& b) const;
};
GramData l2_inner_products(const L2Basis& basis);

// Candidate mass vectors on finitely many points (counting reference unless
// weights are given).
Model discrete_model(const std::vector<double>& points, const std::vector<std::vector<double>>& masses,
                     std::vector<double> weights = {});

// Tuples (P_theta_1, ..., P_theta_n) for every theta in the net.
Model regression_tuples(const std::vector<std::vector<double>>& thetas, TranslationBase base,
                        double scale = 1.0, double alpha = 0.5);

// Declarative builder description (what configs carry).
struct ModelBuilderConfig {
  enum class Family {
    kGaussianLocationGrid,
    kTranslationGrid,
    kHistogramNet,
    kMonotoneNet,
    kL2Linear,
    kDiscrete,
    kRegressionTuples
  };
  Family family = Family::kGaussianLocationGrid;
  int dimension = 1;
  double lo = -1.0;
  double hi = 1.0;
  double step = 0.1;
  TranslationBase base = TranslationBase::kGaussian;
  double scale = 1.0;
  double alpha = 0.5;
  int cells = 2;
  std::vector<double> values;       // histogram values / monotone levels
  std::vector<double> breakpoints;  // monotone breakpoint grid
  int max_pieces = 1;
  std::size_t max_candidates = 5000;
  L2Basis basis;
  std::vector<std::vector<double>> coefficients;  // l2 coefficients / discrete masses / thetas
  std::vector<double> points;
  std::vector<double> weights;
  // Multiplies the grid half-width and step around the grid centre (used to
  // keep grids proportional to the estimation scale along a rate curve).
  ModelBuilderConfig scaled(double factor) const;
};
std::string to_string(ModelBuilderConfig::Family f);
ModelBuilderConfig::Family model_family_from_string(const std::string& s);

Model build(const ModelBuilderConfig& config);

}  // namespace ellest
