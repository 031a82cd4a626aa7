#include "ellest/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ellest {

namespace {

void positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

void nonnegative(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be >= 0");
}

}  // namespace

double thm1_bound(double a0, double a1, double epsilon, double xi, double n, double approx_loss,
                  double min_loss, double vbar) {
  positive(a0, "a0");
  positive(a1, "a1");
  positive(n, "n");
  nonnegative(epsilon, "epsilon");
  nonnegative(xi, "xi");
  nonnegative(approx_loss, "approx_loss");
  nonnegative(min_loss, "min_loss");
  nonnegative(vbar, "vbar");
  const double rn = std::sqrt(n);
  return 2.0 * a0 / a1 * approx_loss - min_loss + rn / a1 * (2.0 * vbar + std::sqrt(2.0 * xi) + epsilon / rn);
}

double thm2_bound(double a0, double a1, double a2, double epsilon, double xi, double approx_loss,
                  double min_loss, double d_bar) {
  positive(a0, "a0");
  positive(a1, "a1");
  positive(a2, "a2");
  nonnegative(epsilon, "epsilon");
  nonnegative(xi, "xi");
  nonnegative(approx_loss, "approx_loss");
  nonnegative(min_loss, "min_loss");
  nonnegative(d_bar, "d_bar");
  return (4.0 * a0 / a1 + 1.0) * approx_loss - min_loss + 2.0 * d_bar + (4.0 * a2 / a1 + 1.0) * 8.0 * xi / a1 +
         2.0 * epsilon / a1;
}

double wasserstein_bound(double n, double xi, double epsilon, double approx) {
  positive(n, "n");
  nonnegative(xi, "xi");
  nonnegative(epsilon, "epsilon");
  nonnegative(approx, "approx");
  const double rn = std::sqrt(n);
  return 5.0 * approx + 2.0 / rn * (1.0 + std::sqrt(2.0 * xi) + epsilon / rn);
}

double l2_bound(double ratio_r, double n, double xi, double epsilon, double approx) {
  positive(ratio_r, "R");
  positive(n, "n");
  nonnegative(xi, "xi");
  nonnegative(epsilon, "epsilon");
  nonnegative(approx, "approx");
  const double rn = std::sqrt(n);
  return 5.0 * approx + 4.0 * ratio_r / rn * (1.0 + std::sqrt(2.0 * xi) + epsilon / rn);
}

double vc_bound_tv(double v, double n, double xi, double epsilon, double approx) {
  if (!(v >= 1.0)) throw std::invalid_argument("V must be >= 1");
  positive(n, "n");
  nonnegative(xi, "xi");
  nonnegative(epsilon, "epsilon");
  nonnegative(approx, "approx");
  return 5.0 * approx + 40.0 * std::sqrt(5.0 * v / n) + 2.0 * std::sqrt(2.0 * xi / n) + 2.0 * epsilon / n;
}

double fast_bound_tv(double a2, double v, double n, double xi, double approx, double c) {
  if (!(a2 >= 1.0)) throw std::invalid_argument("a2 must be >= 1");
  if (!(v >= 1.0)) throw std::invalid_argument("V must be >= 1");
  positive(n, "n");
  positive(c, "c");
  nonnegative(xi, "xi");
  nonnegative(approx, "approx");
  const double lg = std::log(2.0 * std::numbers::e * n / std::min(v, n));
  return 14.0 * approx + 144.0 * a2 / n * (c * a2 * a2 * v * lg + 2.0 + xi);
}

double regression_bound_tv(double d, double n, double xi, double approx) {
  if (!(d >= 1.0)) throw std::invalid_argument("d must be >= 1");
  positive(n, "n");
  nonnegative(xi, "xi");
  nonnegative(approx, "approx");
  return 5.0 * approx + 277.0 * std::sqrt((d + 1.0) / n) + 2.0 * std::sqrt(2.0 * xi / n);
}

double linf_bound(double cells, double n, double xi, double epsilon, double approx) {
  if (!(cells >= 2.0)) throw std::invalid_argument("D must be >= 2");
  if (!(n >= 2.0)) throw std::invalid_argument("n must be >= 2");
  nonnegative(xi, "xi");
  nonnegative(epsilon, "epsilon");
  nonnegative(approx, "approx");
  return 5.0 * approx +
         2.0 * cells * (std::sqrt(2.0 * std::log(2.0 * cells) / n) + std::sqrt(2.0 * xi / n) + epsilon / n);
}

double cj_constant(double j) {
  if (!(j > 1.0) || !std::isfinite(j)) throw std::invalid_argument("j must lie in (1, inf)");
  if (j <= 2.0) return 4.0;
  const double se = std::sqrt(std::numbers::e);
  const double first = std::pow(2.0, 1.0 - 1.0 / j) * std::sqrt(j * se / (se - 1.0)) +
                       std::sqrt(j / (std::numbers::e - se));
  const double second = j * se / (std::pow(2.0, 1.0 / j) * (se - 1.0));
  return 8.0 * std::max(first, second);
}

double lj_histogram_bound(double j, double cells, double n, double xi, double epsilon, double approx,
                          double pbar_norm) {
  if (!(cells >= 2.0)) throw std::invalid_argument("D must be >= 2");
  positive(n, "n");
  positive(pbar_norm, "pbar_norm");
  nonnegative(xi, "xi");
  nonnegative(epsilon, "epsilon");
  nonnegative(approx, "approx");
  const double rn = std::sqrt(n);
  return 5.0 * approx + cj_constant(j) * std::sqrt(cells / n * pbar_norm) +
         4.0 * std::pow(cells, 1.0 - 1.0 / j) / rn * (std::sqrt(2.0 * xi) + epsilon / rn);
}

double monotone_bound(double d, double n, double xi, double approx) {
  if (!(d >= 1.0)) throw std::invalid_argument("d must be >= 1");
  positive(n, "n");
  nonnegative(xi, "xi");
  nonnegative(approx, "approx");
  return 5.0 * approx + 41.0 * std::sqrt(10.0 * d / n) + 2.0 * std::sqrt(2.0 * xi / n);
}

double monotone_bound_iid(double d, double n, double xi, double approx) {
  if (!(d >= 1.0)) throw std::invalid_argument("d must be >= 1");
  positive(n, "n");
  nonnegative(xi, "xi");
  nonnegative(approx, "approx");
  return 5.0 * (approx + 16.4 * std::sqrt(10.0 * d / n)) + 4.0 * std::sqrt(2.0 * xi / n);
}

double birge_approximation(double h, double l, double d) {
  nonnegative(h, "H");
  positive(l, "L");
  if (!(d >= 1.0)) throw std::invalid_argument("d must be >= 1");
  return std::expm1(std::log1p(h * l) / d);
}

MonotoneChoice monotone_optimal_d(double h, double l, double n, double xi, int d_max) {
  if (d_max < 1) throw std::invalid_argument("d_max must be >= 1");
  MonotoneChoice best{1, monotone_bound_iid(1, n, xi, birge_approximation(h, l, 1))};
  for (int d = 2; d <= d_max; ++d) {
    const double b = monotone_bound_iid(d, n, xi, birge_approximation(h, l, d));
    if (b < best.bound) best = {d, b};
  }
  return best;
}

}  // namespace ellest
