#include "ellest/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/special_functions/erf.hpp>

namespace ellest {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return -kInf;
    if (u == 1.0) return kInf;
    throw std::invalid_argument("normal_quantile: u outside [0,1]");
  }
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.back() = hi;
  return out;
}

namespace {

// A segment of the real line pulled back to a finite parameter interval.
struct Segment {
  enum class Map { kIdentity, kRightTail, kLeftTail, kPowerLeft } map;
  double anchor;  // finite end for tails, left end for kPowerLeft
  double length = 0.0;
  int k = 1;

  double x_of(double s) const {
    switch (map) {
      case Map::kIdentity: return s;
      case Map::kRightTail: return anchor + s / (1.0 - s);
      case Map::kLeftTail: return anchor - (1.0 - s) / s;
      case Map::kPowerLeft: return anchor + length * std::pow(s, k);
    }
    return s;
  }
  double jacobian(double s) const {
    switch (map) {
      case Map::kIdentity: return 1.0;
      case Map::kRightTail: return 1.0 / ((1.0 - s) * (1.0 - s));
      case Map::kLeftTail: return 1.0 / (s * s);
      case Map::kPowerLeft: return length * k * std::pow(s, k - 1);
    }
    return 1.0;
  }
};

struct Panel {
  int segment;
  double a, b;
  double f[5];  // at a, a+h/4, a+h/2, a+3h/4, b
  double value;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

void finish_panel(Panel& p) {
  const double h = p.b - p.a;
  const double s1 = h / 6.0 * (p.f[0] + 4.0 * p.f[2] + p.f[4]);
  const double s2 = h / 12.0 * (p.f[0] + 4.0 * p.f[1] + 2.0 * p.f[2] + 4.0 * p.f[3] + p.f[4]);
  p.value = s2 + (s2 - s1) / 15.0;
  p.err = std::abs(s2 - s1) / 15.0;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::vector<double> breakpoints,
                           const QuadratureOptions& opts) {
  QuadratureResult result;
  breakpoints = sorted_unique(std::move(breakpoints));
  breakpoints.erase(std::remove_if(breakpoints.begin(), breakpoints.end(),
                                   [](double x) { return std::isnan(x); }),
                    breakpoints.end());
  if (breakpoints.size() < 2) {
    result.converged = true;
    return result;
  }
  if (breakpoints.front() == -kInf && breakpoints.back() == kInf && breakpoints.size() == 2) {
    breakpoints.insert(breakpoints.begin() + 1, 0.0);
  }

  std::vector<Segment> segments;
  std::vector<std::pair<double, double>> ranges;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i];
    const double hi = breakpoints[i + 1];
    if (lo == -kInf) {
      segments.push_back({Segment::Map::kLeftTail, hi});
      ranges.emplace_back(0.0, 1.0);
    } else if (hi == kInf) {
      segments.push_back({Segment::Map::kRightTail, lo});
      ranges.emplace_back(0.0, 1.0);
    } else {
      int k = 1;
      for (const auto& [pt, kk] : opts.singular_left) {
        if (pt == lo) k = std::max(k, kk);
      }
      if (k > 1) {
        segments.push_back({Segment::Map::kPowerLeft, lo, hi - lo, k});
        ranges.emplace_back(0.0, 1.0);
      } else {
        segments.push_back({Segment::Map::kIdentity, 0.0});
        ranges.emplace_back(lo, hi);
      }
    }
  }

  auto g = [&](int seg, double s) {
    const Segment& sg = segments[static_cast<std::size_t>(seg)];
    double x = sg.x_of(s);
    if (!std::isfinite(x)) return 0.0;
    // Breakpoints are where the integrand jumps: use the one-sided limit from inside the segment.
    if (sg.map == Segment::Map::kIdentity) {
      const auto [lo, hi] = ranges[static_cast<std::size_t>(seg)];
      if (x <= lo) x = std::nextafter(lo, hi);
      if (x >= hi) x = std::nextafter(hi, lo);
    } else if (sg.map == Segment::Map::kRightTail && x <= sg.anchor) {
      x = std::nextafter(sg.anchor, kInf);
    } else if (sg.map == Segment::Map::kLeftTail && x >= sg.anchor) {
      x = std::nextafter(sg.anchor, -kInf);
    }
    const double v = f(x) * sg.jacobian(s);
    return std::isfinite(v) ? v : 0.0;
  };

  std::priority_queue<Panel> heap;
  const int init = std::max(1, opts.initial_panels_per_segment);
  for (std::size_t si = 0; si < segments.size(); ++si) {
    const auto [lo, hi] = ranges[si];
    for (int k = 0; k < init; ++k) {
      Panel p;
      p.segment = static_cast<int>(si);
      p.a = lo + (hi - lo) * k / init;
      p.b = (k + 1 == init) ? hi : lo + (hi - lo) * (k + 1) / init;
      const double h = p.b - p.a;
      for (int q = 0; q < 5; ++q) p.f[q] = g(p.segment, p.a + h * q / 4.0);
      finish_panel(p);
      heap.push(p);
    }
  }

  auto totals = [&heap]() {
    // priority_queue hides its container; copy is cheap relative to the work done.
    auto copy = heap;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().err;
      copy.pop();
    }
    return std::pair<double, double>{v, e};
  };

  double total_err = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      total_err += copy.top().err;
      copy.pop();
    }
  }

  while (total_err > opts.abs_tol && heap.size() < opts.max_panels) {
    Panel p = heap.top();
    heap.pop();
    total_err -= p.err;
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      // Interval can no longer be split; accept it as is.
      heap.push(Panel{p.segment, p.a, p.b, {p.f[0], p.f[1], p.f[2], p.f[3], p.f[4]}, p.value, 0.0});
      continue;
    }
    Panel left{p.segment, p.a, m, {p.f[0], 0.0, p.f[1], 0.0, p.f[2]}, 0.0, 0.0};
    Panel right{p.segment, m, p.b, {p.f[2], 0.0, p.f[3], 0.0, p.f[4]}, 0.0, 0.0};
    const double hq = (m - p.a) / 4.0;
    left.f[1] = g(p.segment, p.a + hq);
    left.f[3] = g(p.segment, p.a + 3.0 * hq);
    right.f[1] = g(p.segment, m + hq);
    right.f[3] = g(p.segment, m + 3.0 * hq);
    finish_panel(left);
    finish_panel(right);
    total_err += left.err + right.err;
    heap.push(left);
    heap.push(right);
    if (total_err <= opts.abs_tol) total_err = totals().second;
  }

  const auto [value, err] = totals();
  result.value = value;
  result.error = err;
  result.panels = heap.size();
  result.converged = err <= opts.abs_tol;
  return result;
}

double integrate_or_throw(const std::function<double(double)>& f,
                          std::vector<double> breakpoints,
                          const QuadratureOptions& opts, const char* what) {
  QuadratureResult r = integrate(f, std::move(breakpoints), opts);
  if (!r.converged) {
    throw NumericalError(std::string(what) + ": quadrature did not converge (error estimate " +
                         std::to_string(r.error) + ")");
  }
  return r.value;
}

std::vector<double> sign_changes(const std::function<double(double)>& g,
                                 const std::vector<double>& probes) {
  std::vector<double> out;
  if (probes.size() < 2) return out;
  double prev_x = probes.front();
  double prev_s = sign_of(g(prev_x));
  for (std::size_t i = 1; i < probes.size(); ++i) {
    const double x = probes[i];
    if (!(x > prev_x)) continue;
    const double s = sign_of(g(x));
    if (s != prev_s) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (sign_of(g(mid)) == prev_s) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_s = s;
  }
  return out;
}

}  // namespace ellest
