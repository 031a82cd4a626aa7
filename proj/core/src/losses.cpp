#include "ellest/losses.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ellest/distances.hpp"

namespace ellest {

LossSpec LossSpec::kl(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("KL loss: a must be > 0");
  LossSpec s = with_kind(LossKind::kKl);
  s.kl_a = a;
  return s;
}

LossSpec LossSpec::lj(double j, double ratio_r) {
  if (!(j > 1.0) || std::isinf(j)) throw std::invalid_argument("L_j loss: j must lie in (1, inf)");
  if (ratio_r < 0.0) throw std::invalid_argument("L_j loss: R must be > 0");
  LossSpec s = with_kind(LossKind::kLj);
  s.j = j;
  s.ratio_r = ratio_r;
  return s;
}

LossSpec LossSpec::linf(int cells) {
  if (cells < 2) throw std::invalid_argument("L_inf loss: need D >= 2 cells");
  LossSpec s = with_kind(LossKind::kLinf);
  s.cells = cells;
  return s;
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kTv: return "tv";
    case LossKind::kHellinger: return "hellinger";
    case LossKind::kKl: return "kl";
    case LossKind::kWasserstein: return "wasserstein";
    case LossKind::kLj: return "lj";
    case LossKind::kLinf: return "linf";
  }
  return "tv";
}

LossKind loss_kind_from_string(const std::string& s) {
  static const std::map<std::string, LossKind> kinds = {
      {"tv", LossKind::kTv},           {"hellinger", LossKind::kHellinger},
      {"kl", LossKind::kKl},           {"wasserstein", LossKind::kWasserstein},
      {"lj", LossKind::kLj},           {"linf", LossKind::kLinf}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw std::invalid_argument("unknown loss kind '" + s + "'");
  return it->second;
}

std::string LossSpec::name() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == LossKind::kKl) os << "(a=" << kl_a << ")";
  if (kind == LossKind::kLj) os << "(j=" << j << ")";
  if (kind == LossKind::kLinf) os << "(D=" << cells << ")";
  return os.str();
}

namespace {

void check_reference(const LossSpec& spec, const Measure& m) {
  if (spec.reference && m.layout() == Measure::Layout::kFinite && m.reference() != *spec.reference) {
    throw std::invalid_argument("loss " + spec.name() + ": measure " + m.tag() +
                                " is not on the loss reference " + spec.reference->describe());
  }
}

}  // namespace

double loss(const LossSpec& spec, const Measure& s, const Measure& q) {
  check_reference(spec, s);
  check_reference(spec, q);
  if (s.layout() == Measure::Layout::kFinite && q.layout() == Measure::Layout::kFinite &&
      !(s.reference() == q.reference())) {
    throw std::invalid_argument("loss: measures live on different reference measures");
  }
  switch (spec.kind) {
    case LossKind::kTv: return tv_distance(s, q);
    case LossKind::kHellinger: return hellinger_sq(s, q);
    case LossKind::kKl: return kl_divergence(s, q);
    case LossKind::kWasserstein: return wasserstein1(s, q);
    case LossKind::kLj: return lj_distance(s, q, spec.j);
    case LossKind::kLinf: {
      const auto& ref = s.reference();
      if (s.layout() != Measure::Layout::kFinite || !ref.has_equal_weights() ||
          (spec.cells != 0 && ref.cells() != spec.cells)) {
        throw std::invalid_argument("L_inf loss needs measures on a uniform partition with D = " +
                                    std::to_string(spec.cells) + " cells");
      }
      return lj_distance(s, q, kInf);
    }
  }
  return 0.0;
}

double aggregate_loss(const LossSpec& spec, const std::vector<Measure>& truth, const Measure& q) {
  if (truth.empty()) throw std::invalid_argument("aggregate_loss: no marginals");
  // Identical marginals (shared state) reduce to n * l exactly.
  double total = 0.0;
  std::size_t i = 0;
  while (i < truth.size()) {
    std::size_t run = 1;
    while (i + run < truth.size() && truth[i + run].same_object(truth[i])) {
      ++run;
    }
    total += static_cast<double>(run) * loss(spec, truth[i], q);
    i += run;
  }
  return total;
}

double aggregate_loss(const LossSpec& spec, const std::vector<Measure>& truth,
                      const std::vector<Measure>& q) {
  if (truth.empty()) throw std::invalid_argument("aggregate_loss: no marginals");
  if (truth.size() != q.size()) throw std::invalid_argument("aggregate_loss: tuple lengths differ");
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) total += loss(spec, truth[i], q[i]);
  return total;
}

}  // namespace ellest
