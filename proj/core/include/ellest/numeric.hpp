#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ellest {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown when a numerical routine cannot deliver the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

double normal_cdf(double x);
double normal_quantile(double u);
double sign_of(double x);

struct QuadratureOptions {
  double abs_tol = 1e-8;
  std::size_t max_panels = std::size_t{1} << 20;
  int initial_panels_per_segment = 16;
  // Integrable singularities at the left end of a segment, as (point, k): the
  // segment starting at `point` is integrated in u with x = a + (b - a) u^k.
  std::vector<std::pair<double, int>> singular_left;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  bool converged = false;
};

// Global adaptive composite Simpson over the segments delimited by the sorted
// breakpoints. Infinite end segments are mapped onto [0,1).
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::vector<double> breakpoints,
                           const QuadratureOptions& opts = {});

// Same, but throws NumericalError if the tolerance was not reached.
double integrate_or_throw(const std::function<double(double)>& f,
                          std::vector<double> breakpoints,
                          const QuadratureOptions& opts = {},
                          const char* what = "quadrature");

// Splits the line at every point where g changes sign. The probe points are
// scanned in order and each sign change is refined by bisection. Returns the
// sorted union of the probes' crossing points (never the probes themselves).
std::vector<double> sign_changes(const std::function<double(double)>& g,
                                 const std::vector<double>& probes);

std::vector<double> sorted_unique(std::vector<double> v);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace ellest
