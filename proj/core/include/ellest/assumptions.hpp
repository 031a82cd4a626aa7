#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellest/model.hpp"
#include "ellest/scores.hpp"

namespace ellest {

// Outcome of an exact check over all (S, P, Q) triples.
struct AssumptionReport {
  bool pass = true;
  // Smallest margin seen (negative means violated beyond tolerance).
  double worst_slack = kInf;
  std::size_t triples = 0;
  // Description of the first offending triple, empty when passing.
  std::string offending;
};

// Assumption 1 on a finite space: antisymmetry, the expectation inequality
// E_S t <= a0 l(S,P) - a1 l(S,Q) and oscillation <= 1, for S ranging over
// `probes` and the model, (P, Q) over ordered model pairs. The loss must be
// resolved (see resolve_loss). Scores are built without pre-condition checks
// so that mis-set constants surface as violations.
AssumptionReport check_assumption1_exact(const LossSpec& spec, const Model& model,
                                         const std::vector<Measure>& probes, double tol = 1e-12);

// Assumption 2-(iv): Var_S t <= a2 (l(S,P) + l(S,Q)).
AssumptionReport check_assumption2_exact(const LossSpec& spec, double a2, const Model& model,
                                         const std::vector<Measure>& probes, double tol = 1e-12);

struct Cond3bisReport {
  double a2_prime = 0.0;  // sup over pairs of [P(p<=q) ^ Q(p>q)] / ||P - Q||
  double a2 = 1.0;        // 1 + a2'
  bool pass = true;       // a2' <= the accepted ceiling
};
Cond3bisReport check_cond3bis(const Model& model, double max_a2_prime = 1.0);

double c1_constant(double a1, double a2);

// Randomised exact suite on finite spaces: each instance has `space_size`
// points, 3 model candidates and 3 extra probes.
struct SuiteReport {
  AssumptionReport assumption1;
  AssumptionReport assumption2;  // only for families with a2
  bool assumption2_checked = false;
  std::size_t spaces = 0;
  std::size_t cond3bis_passed = 0;  // TV: spaces where cond-3bis passed
};
SuiteReport random_assumption_suite(const LossSpec& spec, std::size_t spaces, std::size_t space_size,
                                    std::uint64_t seed);

}  // namespace ellest
