#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ellest/measure.hpp"
#include "ellest/numeric.hpp"

namespace ellest {

enum class DistanceMethod { kAuto, kQuadrature, kClosedForm };

double tv_distance(const Measure& p, const Measure& q, DistanceMethod method = DistanceMethod::kAuto);
double hellinger_sq(const Measure& p, const Measure& q);
double hellinger_affinity(const Measure& p, const Measure& q);
// Extended real; +inf when P is not dominated by Q.
double kl_divergence(const Measure& p, const Measure& q);
double wasserstein1(const Measure& p, const Measure& q);
// j in (1, inf]; j = inf gives the mu-essential sup.
double lj_distance(const Measure& p, const Measure& q, double j);

// How a pair of measures is compared.
enum class PairSpace { kSameFinite, kLine, kGaussianNd };
PairSpace pair_space(const Measure& p, const Measure& q);

// The densities of a pair against a common dominating measure at x. On the
// line, atoms of either measure are compared through their masses and all
// other points through the continuous densities.
struct PairDensity {
  double p;
  double q;
};
PairDensity pair_density(const Measure& p, const Measure& q, PairSpace space, double x);

// Union of intervals with explicit end conventions, used for the sets {p > q}.
struct Interval {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
  bool contains(double x) const {
    return (lo_closed ? x >= lo : x > lo) && (hi_closed ? x <= hi : x < hi);
  }
};
using IntervalSet = std::vector<Interval>;

// Probabilities of A = {p > q} and B = {q > p} under P and Q.
struct TvSets {
  double p_of_a = 0.0;
  double q_of_a = 0.0;
  double p_of_b = 0.0;
  double q_of_b = 0.0;
  // Present for recognised translation families (exact interval form).
  std::optional<IntervalSet> a;
  std::optional<IntervalSet> b;
};
TvSets tv_sets(const Measure& p, const Measure& q);

// Closed-form TV for tagged families, if both measures carry the same tag.
std::optional<double> closed_form_tv(const Measure& p, const Measure& q);

// E_P[f]; f should be piecewise smooth with kinks among `extra_breakpoints`.
double expectation(const Measure& m, const std::function<double(double)>& f,
                   std::vector<double> extra_breakpoints = {});

// Points used to probe sup/inf type conditions on the line: breakpoints, atoms,
// `count` equispaced points over the effective range and quantile points.
std::vector<double> probe_grid(const Measure& p, const Measure& q, std::size_t count = 4096);

// Exact decomposition of [0,1] into pieces on which sgn(F_Q - F_P) is constant.
struct WassersteinPieces {
  std::vector<double> knots;     // 0 = u_0 < ... < u_m = 1
  std::vector<double> signs;     // sgn(F_Q - F_P) on (u_k, u_{k+1})
  std::vector<double> int_diff;  // integral of F_Q - F_P over the piece
  std::vector<double> int_mid;   // integral of (F_P + F_Q)/2 over the piece
  std::vector<double> tail;      // tail[k] = integral of sgn over [u_k, 1]

  double distance() const;
  // integral over [clamp(x,0,1), 1] of sgn.
  double upper_sign_integral(double x) const;
};
WassersteinPieces wasserstein_pieces(const Measure& p, const Measure& q);

}  // namespace ellest
