#include "ellest/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ellest/distances.hpp"

namespace ellest {

Model::Model(std::vector<Measure> candidates, ModelMetadata meta)
    : candidates_(std::move(candidates)), meta_(std::move(meta)) {
  if (candidates_.empty()) throw std::invalid_argument("model: no candidates");
  meta_.product_form = ProductForm::kIid;
  if (!meta_.parameters.empty() && meta_.parameters.size() != candidates_.size()) {
    throw std::invalid_argument("model: one parameter per candidate expected");
  }
}

Model Model::from_tuples(std::vector<std::vector<Measure>> tuples, ModelMetadata meta) {
  if (tuples.empty()) throw std::invalid_argument("model: no candidate tuples");
  const std::size_t n = tuples.front().size();
  if (n == 0) throw std::invalid_argument("model: empty candidate tuple");
  for (const auto& t : tuples) {
    if (t.size() != n) throw std::invalid_argument("model: candidate tuples must all have length n");
  }
  Model m;
  m.tuples_ = std::move(tuples);
  m.meta_ = std::move(meta);
  m.meta_.product_form = ProductForm::kTuples;
  return m;
}

Model Model::with_candidate(const Measure& extra) const {
  if (is_tuple_form()) throw std::invalid_argument("with_candidate: tuple models are fixed");
  Model m = *this;
  m.candidates_.push_back(extra);
  if (!m.meta_.parameters.empty()) m.meta_.parameters.push_back(std::numeric_limits<double>::quiet_NaN());
  return m;
}

namespace {

std::vector<Measure> all_marginals(const Model& model) {
  if (!model.is_tuple_form()) return model.candidates();
  std::vector<Measure> out;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& t = model.tuple(i);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

double log_ratio_sup(const Measure& p, const Measure& q) {
  const PairSpace space = pair_space(p, q);
  auto h = [](double a, double b) {
    if (a == b) return 0.0;
    if (a <= 0.0 || b <= 0.0) return kInf;
    return std::abs(std::log(a / b));
  };
  double m = 0.0;
  if (space == PairSpace::kSameFinite) {
    const auto& dp = p.cell_densities();
    const auto& dq = q.cell_densities();
    for (std::size_t k = 0; k < dp.size(); ++k) m = std::max(m, h(dp[k], dq[k]));
    return m;
  }
  if (space == PairSpace::kGaussianNd) return kInf;
  const Measure lp = p.layout() == Measure::Layout::kLine ? p : p.as_line();
  const Measure lq = q.layout() == Measure::Layout::kLine ? q : q.as_line();
  for (double x : probe_grid(lp, lq)) {
    const PairDensity d = pair_density(lp, lq, space, x);
    m = std::max(m, h(d.p, d.q));
  }
  return m;
}

double sup_gap(const Measure& p, const Measure& q) {
  const PairSpace space = pair_space(p, q);
  if (space == PairSpace::kSameFinite) return lj_distance(p, q, kInf);
  if (space == PairSpace::kGaussianNd) throw std::invalid_argument("lj_ratio_bound: d-dimensional pair");
  const Measure lp = p.layout() == Measure::Layout::kLine ? p : p.as_line();
  const Measure lq = q.layout() == Measure::Layout::kLine ? q : q.as_line();
  double m = 0.0;
  for (double x : probe_grid(lp, lq)) {
    const PairDensity d = pair_density(lp, lq, space, x);
    m = std::max(m, std::abs(d.p - d.q));
  }
  return m;
}

}  // namespace

double kl_log_ratio_bound(const Model& model) {
  const auto ms = all_marginals(model);
  double a = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t k = i + 1; k < ms.size(); ++k) a = std::max(a, log_ratio_sup(ms[i], ms[k]));
  }
  return a;
}

double lj_ratio_bound(const Model& model, double j) {
  const auto ms = all_marginals(model);
  double r = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t k = i + 1; k < ms.size(); ++k) {
      const double norm = lj_distance(ms[i], ms[k], j);
      if (norm > 0.0) r = std::max(r, sup_gap(ms[i], ms[k]) / norm);
    }
  }
  return r;
}

LossSpec resolve_loss(const LossSpec& spec, const Model& model) {
  LossSpec out = spec;
  const ModelMetadata& meta = model.metadata();
  switch (spec.kind) {
    case LossKind::kLj:
      if (out.ratio_r <= 0.0) {
        if (meta.ratio_r) {
          out.ratio_r = *meta.ratio_r;
        } else if (meta.partition && meta.partition->kind() == ReferenceMeasure::Kind::kUniformPartition) {
          out.ratio_r = std::pow(static_cast<double>(meta.partition->cells()), 1.0 / spec.j);
        } else {
          out.ratio_r = lj_ratio_bound(model, spec.j);
        }
        if (!(out.ratio_r > 0.0)) out.ratio_r = 1.0;  // single-point models never build a score
      }
      break;
    case LossKind::kKl:
      if (out.kl_a <= 0.0) {
        out.kl_a = meta.kl_a ? *meta.kl_a : kl_log_ratio_bound(model);
        if (!std::isfinite(out.kl_a)) {
          throw std::invalid_argument("KL loss: model pairs are not mutually dominated");
        }
        if (!(out.kl_a > 0.0)) out.kl_a = 1.0;
      }
      break;
    case LossKind::kLinf:
      if (out.cells == 0) {
        if (!meta.partition) throw std::invalid_argument("L_inf loss: model has no partition");
        out.cells = meta.partition->cells();
      }
      break;
    default: break;
  }
  return out;
}

}  // namespace ellest
