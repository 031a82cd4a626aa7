#include "ellest/robust_tests.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ellest/estimator.hpp"
#include "ellest/model.hpp"

namespace ellest {

std::string to_string(Decision d) {
  switch (d) {
    case Decision::kChooseP:
      return "choose-P";
    case Decision::kChooseQ:
      return "choose-Q";
    case Decision::kTie:
      return "tie";
  }
  return "tie";
}

Decision decide(double statistic) {
  if (statistic > 0.0) return Decision::kChooseQ;
  if (statistic < 0.0) return Decision::kChooseP;
  return Decision::kTie;
}

TestOutcome run_test(const Sample& sample, const Measure& p, const Measure& q, const LossSpec& spec) {
  const Model model({p, q}, ModelMetadata{});
  const double s = pairwise_statistic(sample, model, spec)(0, 1);
  return {decide(s), s};
}

TestOutcome run_test(const Sample& sample, const std::vector<Measure>& p, const std::vector<Measure>& q,
                     const LossSpec& spec) {
  ModelMetadata meta;
  meta.product_form = ProductForm::kTuples;
  const Model model = Model::from_tuples({p, q}, meta);
  const double s = pairwise_statistic(sample, model, spec)(0, 1);
  return {decide(s), s};
}

TestOutcome run_test(const Sample& sample, const ScoreFunction& score) {
  double s = 0.0;
  if (sample.dim() == 1) {
    s = score.sum_sorted(sample.sorted());
  } else {
    s = score.sum(sample);
  }
  return {decide(s), s};
}

DevroyeLugosiTest::DevroyeLugosiTest(const Measure& p, const Measure& q)
    : p_(p), q_(q), space_(pair_space(p, q)) {
  const TvSets sets = tv_sets(p, q);
  p_b_ = sets.p_of_b;
  q_b_ = sets.q_of_b;
}

TestOutcome DevroyeLugosiTest::operator()(const Sample& sample) const {
  if (sample.n() == 0) throw std::invalid_argument("devroye_lugosi_test: empty sample");
  if (sample.dim() != 1) throw std::invalid_argument("devroye_lugosi_test: 1-d sample expected");
  std::size_t in_b = 0;
  for (std::size_t k = 0; k < sample.n(); ++k) {
    const PairDensity d = pair_density(p_, q_, space_, sample[k]);
    if (d.q > d.p) ++in_b;
  }
  const double nu = static_cast<double>(in_b) / static_cast<double>(sample.n());
  const double t = std::abs(nu - q_b_) - std::abs(nu - p_b_);
  return {t > 0.0 ? Decision::kChooseQ : Decision::kChooseP, t};
}

TestOutcome devroye_lugosi_test(const Sample& sample, const Measure& p, const Measure& q) {
  return DevroyeLugosiTest(p, q)(sample);
}

double test_gamma(double a0, double a1, double loss_star_p, double loss_star_q) {
  if (!(a0 > 0.0) || !(a1 > 0.0)) throw std::invalid_argument("test_gamma: a0, a1 must be > 0");
  if (!(loss_star_p >= 0.0)) throw std::invalid_argument("test_gamma: l(P*, P) must be >= 0");
  if (!(loss_star_q > 0.0)) throw std::invalid_argument("test_gamma: l(P*, Q) must be > 0");
  return a0 * loss_star_p / (a1 * loss_star_q);
}

double hoeffding_bound(double a1, double gamma, double agg_loss_q, double n) {
  if (!(a1 > 0.0)) throw std::invalid_argument("hoeffding_bound: a1 must be > 0");
  if (!(n > 0.0)) throw std::invalid_argument("hoeffding_bound: n must be > 0");
  if (!(agg_loss_q > 0.0)) throw std::invalid_argument("hoeffding_bound: l(P*, Q) must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("hoeffding_bound: gamma must be >= 0");
  if (gamma >= 1.0) return 1.0;
  const double z = a1 * (1.0 - gamma);
  return std::exp(-2.0 * agg_loss_q * agg_loss_q / n * z * z);
}

double bernstein_bound(double a0, double a1, double a2, double gamma, double agg_loss_q) {
  if (!(a0 > 0.0) || !(a1 > 0.0) || !(a2 > 0.0)) {
    throw std::invalid_argument("bernstein_bound: constants must be > 0");
  }
  if (!(agg_loss_q > 0.0)) throw std::invalid_argument("bernstein_bound: l(P*, Q) must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("bernstein_bound: gamma must be >= 0");
  if (gamma >= 1.0) return 1.0;
  const double g = 1.0 - gamma;
  const double denom = g / 3.0 + (1.0 + gamma * a1 / a0) * (a2 / a1);
  return std::exp(-agg_loss_q / 2.0 * a1 * g * g / denom);
}

HellingerBound hellinger_test_bound(double h2_star_p, double h2_star_q, double n) {
  if (!(h2_star_q > 0.0)) throw std::invalid_argument("hellinger_test_bound: h^2(P*, Q) must be > 0");
  if (!(h2_star_p >= 0.0)) throw std::invalid_argument("hellinger_test_bound: h^2(P*, P) must be >= 0");
  if (!(n > 0.0)) throw std::invalid_argument("hellinger_test_bound: n must be > 0");
  constexpr double r2 = std::numbers::sqrt2;
  HellingerBound out;
  out.gamma = (3.0 + 2.0 * r2) * h2_star_p / h2_star_q;
  if (out.gamma >= 1.0) return out;
  out.applies = true;
  const double g = 1.0 - out.gamma;
  out.bound = std::exp(-3.0 * (r2 - 1.0) * g * g * n * h2_star_q /
                       (4.0 * (9.0 * r2 + 10.0 + out.gamma * (9.0 * r2 - 10.0))));
  return out;
}

double variational_bound(double kappa, double b, double loss_pq, double n) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("variational_bound: kappa must be >= 0");
  if (!(b > 0.0)) throw std::invalid_argument("variational_bound: b must be > 0");
  if (!(loss_pq >= 0.0)) throw std::invalid_argument("variational_bound: l(P, Q) must be >= 0");
  if (!(n > 0.0)) throw std::invalid_argument("variational_bound: n must be > 0");
  if (kappa >= 0.5) return 1.0;
  const double g = 1.0 - 2.0 * kappa;
  return std::exp(-g * g * n * loss_pq * loss_pq / (2.0 * b * b));
}

double lj_test_bound(double j, double ratio_r, double gamma, double mean_loss_q, double n) {
  if (!(j > 1.0)) throw std::invalid_argument("lj_test_bound: j must be > 1");
  if (!(ratio_r > 0.0) || !std::isfinite(ratio_r)) throw std::invalid_argument("lj_test_bound: R must be finite, > 0");
  if (!(mean_loss_q > 0.0)) throw std::invalid_argument("lj_test_bound: mean loss must be > 0");
  if (!(n > 0.0)) throw std::invalid_argument("lj_test_bound: n must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("lj_test_bound: gamma must be >= 0");
  if (gamma >= 1.0) return 1.0;
  const double g = 1.0 - gamma;
  return std::exp(-g * g * n / (8.0 * std::pow(ratio_r, 2.0 * (j - 1.0))) * mean_loss_q * mean_loss_q);
}

double lj_test_bound_iid(double j, double ratio_r, double dist_star_p, double dist_star_q, double n) {
  if (!(dist_star_q > 0.0)) throw std::invalid_argument("lj_test_bound_iid: ||p* - q|| must be > 0");
  if (!(dist_star_p >= 0.0)) throw std::invalid_argument("lj_test_bound_iid: ||p* - p|| must be >= 0");
  const double gamma = 3.0 * dist_star_p / dist_star_q;
  if (gamma >= 1.0) return 1.0;
  // The general bound with the exponent quartered.
  const double general = lj_test_bound(j, ratio_r, gamma, dist_star_q, n);
  return std::exp(std::log(general) / 4.0);
}

}  // namespace ellest
