#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ellest/distances.hpp"
#include "ellest/losses.hpp"
#include "ellest/measure.hpp"

namespace ellest {

struct FamilyConstants {
  double a0 = 1.5;
  double a1 = 0.5;
  std::optional<double> a2;
  double b = 1.0;
};

enum class ScoreKind { kZero, kTv, kHellinger, kKl, kLj, kLinf, kWasserstein, kVariational };

struct ScoreOptions {
  // When false, the pre-condition checks (ratio bound, log-ratio bound,
  // witness oscillation) are skipped. Used by the assumption checkers.
  bool validate = true;
  std::size_t probe_count = 4096;
};

// The score t_(P,Q). Cheap to copy; the (Q,P) score is the exact negation.
class ScoreFunction {
 public:
  ScoreFunction() = default;

  ScoreKind kind() const { return kind_; }
  const FamilyConstants& constants() const { return constants_; }
  // Data-free part of t (the integral term).
  double constant_part() const;

  double operator()(double x) const;
  double operator()(std::span<const double> x) const;

  // Density-based kinds (TV, Hellinger, KL, L_j) evaluate from the pair of
  // densities at the point.
  bool density_based() const;
  double from_densities(double p, double q) const;

  // Exact interval description of the TV sets (translation families).
  bool has_interval_form() const;
  // Sum over a sorted 1-d sample; uses interval counting when available.
  // `prefix` (size n+1, prefix[i] = sum of the first i values) enables the
  // piecewise-linear fast path of the Wasserstein score.
  double sum_sorted(const std::vector<double>& sorted, const std::vector<double>* prefix = nullptr) const;
  double sum(const Sample& sample) const;

  ScoreFunction negated() const;

  struct Data;

 private:
  friend ScoreFunction make_score_function(ScoreKind, FamilyConstants, std::shared_ptr<const Data>);
  ScoreKind kind_ = ScoreKind::kZero;
  FamilyConstants constants_;
  double sign_ = 1.0;
  std::shared_ptr<const Data> data_;
};

ScoreFunction zero_score(FamilyConstants constants = {});
ScoreFunction tv_score(const Measure& p, const Measure& q, const ScoreOptions& opts = {});
ScoreFunction hellinger_score(const Measure& p, const Measure& q, const ScoreOptions& opts = {});
ScoreFunction kl_score(const Measure& p, const Measure& q, double a, const ScoreOptions& opts = {});
ScoreFunction lj_score(const Measure& p, const Measure& q, double j, double ratio_r,
                       const ScoreOptions& opts = {});
ScoreFunction linf_score(const Measure& p, const Measure& q, const ScoreOptions& opts = {});
ScoreFunction wasserstein_score(const Measure& p, const Measure& q, const ScoreOptions& opts = {});
// t = (1/b)[ integral of f d(P+Q)/2 - f ]. `breakpoints` lists kinks of f.
ScoreFunction variational_score(const Measure& p, const Measure& q, std::function<double(double)> f,
                                double b, std::vector<double> breakpoints = {},
                                const ScoreOptions& opts = {});

// Witnesses realising the variational forms of TV and W.
std::function<double(double)> tv_witness(const Measure& p, const Measure& q);
std::function<double(double)> wasserstein_witness(const Measure& p, const Measure& q);
// Kinks / jumps of the witnesses, to pass to variational_score.
std::vector<double> tv_witness_breakpoints(const Measure& p, const Measure& q);
std::vector<double> wasserstein_witness_breakpoints(const Measure& p, const Measure& q);

// Constants (a0, a1, a2, b) of the family attached to a loss. L_j needs
// spec.ratio_r > 0 and L_inf needs spec.cells.
FamilyConstants family_constants(const LossSpec& spec);

// Dispatch on the loss kind.
ScoreFunction make_score(const LossSpec& spec, const Measure& p, const Measure& q,
                         const ScoreOptions& opts = {});

}  // namespace ellest
