#pragma once

#include <string>
#include <vector>

#include "ellest/losses.hpp"
#include "ellest/measure.hpp"
#include "ellest/scores.hpp"

namespace ellest {

enum class Decision { kChooseP, kChooseQ, kTie };
std::string to_string(Decision d);

struct TestOutcome {
  Decision decision = Decision::kTie;
  double statistic = 0.0;  // T(X, P, Q)
};

// ChooseQ when the statistic is positive, ChooseP when negative.
Decision decide(double statistic);

// The test between P and Q (or tuples of marginals) for a loss.
TestOutcome run_test(const Sample& sample, const Measure& p, const Measure& q, const LossSpec& spec);
TestOutcome run_test(const Sample& sample, const std::vector<Measure>& p, const std::vector<Measure>& q,
                     const LossSpec& spec);
// With a score built once (Monte Carlo loops).
TestOutcome run_test(const Sample& sample, const ScoreFunction& score);

// Comparison test of Devroye and Lugosi: with B = {q > p},
// T' = |nu_n(B) - Q(B)| - |nu_n(B) - P(B)|; P is rejected iff T' > 0.
class DevroyeLugosiTest {
 public:
  DevroyeLugosiTest(const Measure& p, const Measure& q);
  TestOutcome operator()(const Sample& sample) const;
  double p_of_b() const { return p_b_; }
  double q_of_b() const { return q_b_; }

 private:
  Measure p_, q_;
  PairSpace space_;
  double p_b_ = 0.0, q_b_ = 0.0;
};
TestOutcome devroye_lugosi_test(const Sample& sample, const Measure& p, const Measure& q);

// gamma = a0 l(P*, P) / [a1 l(P*, Q)].
double test_gamma(double a0, double a1, double loss_star_p, double loss_star_q);

// Error bounds for P[test chooses Q]. Each returns 1 when gamma >= 1.
double hoeffding_bound(double a1, double gamma, double agg_loss_q, double n);
double bernstein_bound(double a0, double a1, double a2, double gamma, double agg_loss_q);

struct HellingerBound {
  double gamma = 0.0;
  double bound = 1.0;
  bool applies = false;  // gamma < 1
};
// Squared Hellinger distances per observation; i.i.d. sample of size n.
HellingerBound hellinger_test_bound(double h2_star_p, double h2_star_q, double n);

// exp[-(1 - 2 kappa)^2 n l^2(P,Q) / (2 b^2)]; 1 when kappa >= 1/2.
double variational_bound(double kappa, double b, double loss_pq, double n);

// exp[-(1 - gamma)^2 n mean_q^2 / (8 R^(2(j-1)))] with
// mean_q = n^-1 sum ||p_i* - q||_j and gamma = 3 sum||p_i* - p|| / sum||p_i* - q||.
double lj_test_bound(double j, double ratio_r, double gamma, double mean_loss_q, double n);
// i.i.d. form with the extra factor 1/4 in the exponent; gamma from the distances.
double lj_test_bound_iid(double j, double ratio_r, double dist_star_p, double dist_star_q, double n);

}  // namespace ellest
