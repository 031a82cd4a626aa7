#include "ellest/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ellest/distances.hpp"
#include "ellest/rng.hpp"

namespace ellest {

namespace {

// One representative point per cell of a finite reference.
std::vector<double> cell_points(const ReferenceMeasure& ref) {
  if (ref.kind() == ReferenceMeasure::Kind::kDiscrete) return ref.points();
  const auto e = ref.edges();
  std::vector<double> mid(e.size() - 1);
  for (std::size_t k = 0; k + 1 < e.size(); ++k) mid[k] = 0.5 * (e[k] + e[k + 1]);
  return mid;
}

struct Triple {
  std::size_t s, p, q;
};

std::string describe(const Triple& t, std::size_t model_size) {
  std::ostringstream os;
  os << "S=" << (t.s < model_size ? "model[" : "probe[") << (t.s < model_size ? t.s : t.s - model_size)
     << "], P=model[" << t.p << "], Q=model[" << t.q << "]";
  return os.str();
}

template <class Check>
AssumptionReport scan(const LossSpec& spec, const Model& model, const std::vector<Measure>& probes,
                      Check&& check) {
  if (model.is_tuple_form()) throw std::invalid_argument("assumption checks need an i.i.d. model");
  const Measure& first = model.candidate(0);
  if (first.layout() != Measure::Layout::kFinite) {
    throw std::invalid_argument("assumption checks need measures on a finite reference");
  }
  const ReferenceMeasure& ref = first.reference();
  const auto pts = cell_points(ref);
  std::vector<Measure> ss = model.candidates();
  ss.insert(ss.end(), probes.begin(), probes.end());
  for (const Measure& m : ss) {
    if (m.layout() != Measure::Layout::kFinite || m.reference() != ref) {
      throw std::invalid_argument("assumption checks: every measure must share the model reference");
    }
  }
  ScoreOptions opts;
  opts.validate = false;
  AssumptionReport rep;
  const std::size_t m = model.size();
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      if (p == q) continue;
      const ScoreFunction t = make_score(spec, model.candidate(p), model.candidate(q), opts);
      const ScoreFunction back = make_score(spec, model.candidate(q), model.candidate(p), opts);
      std::vector<double> tv(pts.size()), bv(pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) {
        tv[k] = t(pts[k]);
        bv[k] = back(pts[k]);
      }
      for (std::size_t s = 0; s < ss.size(); ++s) {
        const Triple tri{s, p, q};
        const double slack = check(t, tv, bv, ss[s], model.candidate(p), model.candidate(q));
        ++rep.triples;
        if (slack < rep.worst_slack) rep.worst_slack = slack;
        if (slack < 0.0 && rep.pass) {
          rep.pass = false;
          rep.offending = describe(tri, m);
        }
      }
    }
  }
  (void)spec;
  return rep;
}

double mean_under(const Measure& s, const std::vector<double>& values) {
  const auto probs = s.cell_probs();
  double e = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] != 0.0) e += probs[k] * values[k];
  }
  return e;
}

}  // namespace

AssumptionReport check_assumption1_exact(const LossSpec& spec, const Model& model,
                                         const std::vector<Measure>& probes, double tol) {
  const FamilyConstants fc = family_constants(spec);
  return scan(spec, model, probes,
              [&](const ScoreFunction&, const std::vector<double>& tv, const std::vector<double>& bv,
                  const Measure& s, const Measure& p, const Measure& q) {
                double slack = kInf;
                // (i) antisymmetry
                for (std::size_t k = 0; k < tv.size(); ++k) {
                  slack = std::min(slack, tol - std::abs(tv[k] + bv[k]));
                }
                // (iii) oscillation
                const auto [lo, hi] = std::minmax_element(tv.begin(), tv.end());
                slack = std::min(slack, 1.0 + tol - (*hi - *lo));
                // (ii) expectation inequality
                const double lp = loss(spec, s, p);
                const double lq = loss(spec, s, q);
                if (std::isfinite(lp)) {
                  const double rhs = fc.a0 * lp - fc.a1 * lq;
                  slack = std::min(slack, rhs - mean_under(s, tv) + tol);
                }
                return slack;
              });
}

AssumptionReport check_assumption2_exact(const LossSpec& spec, double a2, const Model& model,
                                         const std::vector<Measure>& probes, double tol) {
  if (!(a2 > 0.0)) throw std::invalid_argument("check_assumption2_exact: a2 must be > 0");
  return scan(spec, model, probes,
              [&](const ScoreFunction&, const std::vector<double>& tv, const std::vector<double>&,
                  const Measure& s, const Measure& p, const Measure& q) {
                const double e = mean_under(s, tv);
                std::vector<double> sq(tv.size());
                for (std::size_t k = 0; k < tv.size(); ++k) sq[k] = (tv[k] - e) * (tv[k] - e);
                const double var = mean_under(s, sq);
                const double rhs = a2 * (loss(spec, s, p) + loss(spec, s, q));
                if (!std::isfinite(rhs)) return kInf;
                return rhs - var + tol;
              });
}

Cond3bisReport check_cond3bis(const Model& model, double max_a2_prime) {
  if (model.is_tuple_form()) throw std::invalid_argument("check_cond3bis: i.i.d. model expected");
  Cond3bisReport rep;
  const std::size_t m = model.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      if (i == k) continue;
      const Measure& p = model.candidate(i);
      const Measure& q = model.candidate(k);
      const TvSets s = tv_sets(p, q);  // A = {p > q}
      const double tv = 0.5 * (s.p_of_a - s.q_of_a + s.q_of_b - s.p_of_b);
      const double lhs = std::min(std::max(0.0, 1.0 - s.p_of_a), std::max(0.0, s.q_of_a));
      if (tv <= 0.0) continue;  // identical laws
      rep.a2_prime = std::max(rep.a2_prime, lhs / tv);
    }
  }
  // Round-off in set probabilities.
  if (rep.a2_prime < 1e-12) rep.a2_prime = 0.0;
  rep.a2 = 1.0 + rep.a2_prime;
  rep.pass = rep.a2_prime <= max_a2_prime;
  return rep;
}

double c1_constant(double a1, double a2) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw std::invalid_argument("c1_constant: a1, a2 must be > 0");
  return 0.5 * a1 / (2.0 * (1.0 + std::log(4.0)) + 4.0 * a1 / a2 + 16.0 * a2 * std::log(2.0) / a1);
}

namespace {

std::vector<double> random_masses(Rng& rng, std::size_t k) {
  std::vector<double> m(k);
  double s = 0.0;
  for (double& x : m) {
    x = -std::log(rng.uniform());
    s += x;
  }
  for (double& x : m) x /= s;
  return m;
}

}  // namespace

SuiteReport random_assumption_suite(const LossSpec& spec, std::size_t spaces, std::size_t space_size,
                                    std::uint64_t seed) {
  if (space_size < 2) throw std::invalid_argument("assumption suite: need at least 2 points");
  SuiteReport out;
  out.assumption2_checked = spec.kind == LossKind::kTv || spec.kind == LossKind::kHellinger ||
                            spec.kind == LossKind::kKl;
  auto merge = [](AssumptionReport& into, const AssumptionReport& r, std::size_t space) {
    into.triples += r.triples;
    into.worst_slack = std::min(into.worst_slack, r.worst_slack);
    if (!r.pass && into.pass) {
      into.pass = false;
      into.offending = "space " + std::to_string(space) + ": " + r.offending;
    }
  };
  for (std::size_t sp = 0; sp < spaces; ++sp) {
    Rng rng(seed, sp);
    std::vector<double> pts(space_size);
    for (std::size_t k = 0; k < space_size; ++k) pts[k] = static_cast<double>(k);
    ReferenceMeasure ref = ReferenceMeasure::uniform_partition(static_cast<int>(space_size), 0.0, 1.0);
    if (spec.kind != LossKind::kLinf) {
      std::vector<double> w(space_size);
      for (double& x : w) x = 0.2 + 1.8 * rng.uniform();
      ref = ReferenceMeasure::discrete(pts, w);
    }
    std::vector<Measure> cands, probes;
    for (int c = 0; c < 3; ++c) cands.push_back(Measure::from_masses(ref, random_masses(rng, space_size)));
    for (int c = 0; c < 3; ++c) probes.push_back(Measure::from_masses(ref, random_masses(rng, space_size)));
    ModelMetadata meta;
    meta.family = "random";
    meta.partition = ref;
    const Model model(cands, meta);
    LossSpec resolved = spec;
    if (spec.kind == LossKind::kLj && spec.ratio_r <= 0.0) resolved.ratio_r = lj_ratio_bound(model, spec.j);
    resolved = resolve_loss(resolved, model);
    merge(out.assumption1, check_assumption1_exact(resolved, model, probes), sp);
    if (out.assumption2_checked) {
      double a2 = 0.0;
      if (spec.kind == LossKind::kTv) {
        const Cond3bisReport c3 = check_cond3bis(model);
        if (c3.pass) ++out.cond3bis_passed;
        a2 = c3.a2;
      } else {
        a2 = *family_constants(resolved).a2;
      }
      merge(out.assumption2, check_assumption2_exact(resolved, a2, model, probes), sp);
    }
    ++out.spaces;
  }
  return out;
}

}  // namespace ellest
