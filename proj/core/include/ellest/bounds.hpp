#pragma once

namespace ellest {

// Right-hand side of the general deviation bound under Assumption 1:
// (2a0/a1) l_bar - l_min + (sqrt(n)/a1) [2 vbar + sqrt(2 xi) + eps/sqrt(n)].
double thm1_bound(double a0, double a1, double epsilon, double xi, double n, double approx_loss,
                  double min_loss, double vbar);

// Under Assumption 2: [(4a0/a1)+1] l_bar - l_min + 2 D_bar
// + [(4a2/a1)+1] 8 xi / a1 + 2 eps / a1.
double thm2_bound(double a0, double a1, double a2, double epsilon, double xi, double approx_loss,
                  double min_loss, double d_bar);

// Per-observation W bound: 5 approx + (2/sqrt n)(1 + sqrt(2 xi) + eps/sqrt n).
double wasserstein_bound(double n, double xi, double epsilon, double approx);

// L2 linear models: 5 approx + (4R/sqrt n)(1 + sqrt(2 xi) + eps/sqrt n).
double l2_bound(double ratio_r, double n, double xi, double epsilon, double approx);

// TV with VC classes: 5 approx + 40 sqrt(5V/n) + 2 sqrt(2 xi/n) + 2 eps/n.
double vc_bound_tv(double v, double n, double xi, double epsilon, double approx);

// Fast TV rate: 14 approx + (144 a2/n)[c a2^2 V log(2en/(V ^ n)) + 2 + xi].
inline constexpr double kFastRateConstant = 4.5e5;
double fast_bound_tv(double a2, double v, double n, double xi, double approx, double c = kFastRateConstant);

// Regression with unimodal errors: 5 approx + 277 sqrt((d+1)/n) + 2 sqrt(2 xi/n).
double regression_bound_tv(double d, double n, double xi, double approx);

// L_inf histograms: 5 approx + 2D [sqrt(2 log(2D)/n) + sqrt(2 xi/n) + eps/n].
double linf_bound(double cells, double n, double xi, double epsilon, double approx);

// C_j of the histogram l_j bound (4 for j in (1, 2]).
double cj_constant(double j);
// 5 approx + C_j sqrt(D/n * pbar_norm) + (4 D^(1-1/j)/sqrt n)(sqrt(2 xi) + eps/sqrt n).
double lj_histogram_bound(double j, double cells, double n, double xi, double epsilon, double approx,
                          double pbar_norm);

// Monotone densities, general form: 5 approx + 41 sqrt(10d/n) + 2 sqrt(2 xi/n).
double monotone_bound(double d, double n, double xi, double approx);
// i.i.d. form: 5 [approx + 16.4 sqrt(10d/n)] + 4 sqrt(2 xi/n).
double monotone_bound_iid(double d, double n, double xi, double approx);

// Histogram approximation of a density of variation H on an interval of
// length L with d pieces: exp[log(HL + 1)/d] - 1.
double birge_approximation(double h, double l, double d);

// Integer d in [1, d_max] minimising monotone_bound_iid with the Birge
// approximation term.
struct MonotoneChoice {
  int d = 1;
  double bound = 0.0;
};
MonotoneChoice monotone_optimal_d(double h, double l, double n, double xi, int d_max = 10000);

}  // namespace ellest
