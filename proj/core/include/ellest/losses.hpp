#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellest/measure.hpp"

namespace ellest {

enum class LossKind { kTv, kHellinger, kKl, kWasserstein, kLj, kLinf };

struct LossSpec {
  LossKind kind = LossKind::kTv;
  double kl_a = 0.0;  // bound on |log(p/q)| over model pairs
  double j = 2.0;
  double ratio_r = 0.0;  // 0 means "take it from the model"
  int cells = 0;         // L_inf partition size
  std::optional<ReferenceMeasure> reference;

  static LossSpec tv() { return {}; }
  static LossSpec hellinger() { return with_kind(LossKind::kHellinger); }
  static LossSpec kl(double a);
  static LossSpec wasserstein() { return with_kind(LossKind::kWasserstein); }
  static LossSpec lj(double j, double ratio_r = 0.0);
  static LossSpec linf(int cells);

  std::string name() const;

 private:
  static LossSpec with_kind(LossKind k) {
    LossSpec s;
    s.kind = k;
    return s;
  }
};

LossKind loss_kind_from_string(const std::string& s);
std::string to_string(LossKind kind);

// l(S, Q) for the loss; the Hellinger loss is h^2. May be +inf for KL.
double loss(const LossSpec& spec, const Measure& s, const Measure& q);

// Sum over coordinates of l(P_i*, Q).
double aggregate_loss(const LossSpec& spec, const std::vector<Measure>& truth, const Measure& q);
// Tuple form: sum over i of l(P_i*, Q_i).
double aggregate_loss(const LossSpec& spec, const std::vector<Measure>& truth,
                      const std::vector<Measure>& q);

}  // namespace ellest
