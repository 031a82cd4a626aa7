#include "ellest/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellest {

namespace {

void require_probability(const Measure& m, const char* op) {
  if (m.is_signed()) {
    for (double v : m.cell_densities()) {
      if (v < 0.0) throw std::invalid_argument(std::string(op) + ": signed measure not allowed");
    }
  }
  if (!m.is_probability(1e-6)) {
    throw std::invalid_argument(std::string(op) + ": input is not a probability measure (" + m.tag() + ")");
  }
}

Measure line_of(const Measure& m) {
  return m.layout() == Measure::Layout::kLine ? m : m.as_line();
}

// Breakpoints of the continuous parts, with infinite ends when needed.
std::vector<double> continuous_breaks(const Measure& a, const Measure& b) {
  double lo = kInf, hi = -kInf;
  std::vector<double> bp;
  for (const Measure* m : {&a, &b}) {
    for (const auto& [w, c] : m->components()) {
      auto [s0, s1] = c.support();
      lo = std::min(lo, s0);
      hi = std::max(hi, s1);
      auto cb = c.breakpoints();
      bp.insert(bp.end(), cb.begin(), cb.end());
    }
  }
  if (lo > hi) return {};
  std::vector<double> out{lo, hi};
  for (double x : bp) {
    if (x > lo && x < hi) out.push_back(x);
  }
  return sorted_unique(std::move(out));
}

QuadratureOptions quad_options(const Measure& a, const Measure& b) {
  QuadratureOptions o;
  auto sa = a.singular_points();
  auto sb = b.singular_points();
  o.singular_left.insert(o.singular_left.end(), sa.begin(), sa.end());
  o.singular_left.insert(o.singular_left.end(), sb.begin(), sb.end());
  return o;
}

double continuous_density(const Measure& line, double x) {
  double d = 0.0;
  for (const auto& [w, c] : line.components()) d += w * c.pdf(x);
  return d;
}

std::vector<double> atom_locations(const Measure& a, const Measure& b) {
  std::vector<double> xs;
  for (const Atom& at : a.atoms()) xs.push_back(at.x);
  for (const Atom& at : b.atoms()) xs.push_back(at.x);
  return sorted_unique(std::move(xs));
}

double gaussian_gap(const Measure& p, const Measure& q) {
  if (p.layout() == Measure::Layout::kGaussianNd) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.mean().size(); ++i) {
      const double d = p.mean()[i] - q.mean()[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  return std::abs(p.family().location - q.family().location) / p.family().scale;
}

bool both_gaussian(const Measure& p, const Measure& q) {
  return p.family().kind == FamilyTag::Kind::kGaussian && p.family().same_family(q.family()) &&
         p.dimension() == q.dimension();
}

// Probability that a 1-d line measure assigns to an interval.
double interval_prob(const Measure& line, const Interval& iv) {
  double total = 0.0;
  for (const auto& [w, c] : line.components()) total += w * (c.cdf(iv.hi) - c.cdf(iv.lo));
  for (const Atom& a : line.atoms()) {
    if (iv.contains(a.x)) total += a.mass;
  }
  return total;
}

// Sets {p > q} and {q > p} of two same-family translations, with p at the
// smaller location. Returns (A, B).
std::pair<IntervalSet, IntervalSet> ordered_translation_sets(const FamilyTag& fp, const FamilyTag& fq) {
  const double t0 = fp.location, t1 = fq.location;
  const double delta = t1 - t0;
  switch (fp.kind) {
    case FamilyTag::Kind::kGaussian:
    case FamilyTag::Kind::kCauchy: {
      const double m = 0.5 * (t0 + t1);
      return {{{-kInf, m, false, false}}, {{m, kInf, false, false}}};
    }
    case FamilyTag::Kind::kUniformTranslation: {
      const double h = 0.5 * fp.scale;
      if (delta < fp.scale) {
        return {{{t0 - h, t1 - h, true, false}}, {{t0 + h, t1 + h, true, false}}};
      }
      return {{{t0 - h, t0 + h, true, false}}, {{t1 - h, t1 + h, true, false}}};
    }
    case FamilyTag::Kind::kPowerTranslation: {
      if (delta >= 1.0) return {{{t0, t0 + 1.0, false, true}}, {{t1, t1 + 1.0, false, true}}};
      if (fp.alpha == 1.0) return {{{t0, t1, false, true}}, {{t0 + 1.0, t1 + 1.0, false, true}}};
      return {{{t0, t1, false, true}}, {{t1, t1 + 1.0, false, true}}};
    }
    case FamilyTag::Kind::kNone: break;
  }
  throw std::logic_error("ordered_translation_sets: untagged family");
}

}  // namespace

PairSpace pair_space(const Measure& p, const Measure& q) {
  const bool pn = p.layout() == Measure::Layout::kGaussianNd;
  const bool qn = q.layout() == Measure::Layout::kGaussianNd;
  if (pn || qn) {
    if (!(pn && qn) || p.dimension() != q.dimension()) {
      throw std::invalid_argument("measures live on spaces of different dimension");
    }
    return PairSpace::kGaussianNd;
  }
  if (p.layout() == Measure::Layout::kFinite && q.layout() == Measure::Layout::kFinite &&
      p.reference() == q.reference()) {
    return PairSpace::kSameFinite;
  }
  return PairSpace::kLine;
}

PairDensity pair_density(const Measure& p, const Measure& q, PairSpace space, double x) {
  if (space == PairSpace::kSameFinite) return {p.density(x), q.density(x)};
  if (space == PairSpace::kGaussianNd) throw std::invalid_argument("pair_density: use d-vectors");
  const double ap = p.atom_mass(x), aq = q.atom_mass(x);
  if (ap > 0.0 || aq > 0.0) return {ap, aq};
  const double dp = p.layout() == Measure::Layout::kLine ? p.density(x) : continuous_density(line_of(p), x);
  const double dq = q.layout() == Measure::Layout::kLine ? q.density(x) : continuous_density(line_of(q), x);
  return {dp, dq};
}

std::optional<double> closed_form_tv(const Measure& p, const Measure& q) {
  const FamilyTag& fp = p.family();
  const FamilyTag& fq = q.family();
  if (!fp.same_family(fq) || p.dimension() != q.dimension()) return std::nullopt;
  if (p.layout() == Measure::Layout::kFinite || q.layout() == Measure::Layout::kFinite) return std::nullopt;
  switch (fp.kind) {
    case FamilyTag::Kind::kGaussian: {
      const double d = gaussian_gap(p, q);
      return std::erf(d / (2.0 * std::numbers::sqrt2));
    }
    case FamilyTag::Kind::kCauchy: {
      const double d = std::abs(fp.location - fq.location) / fp.scale;
      return 2.0 / std::numbers::pi * std::atan(0.5 * d);
    }
    case FamilyTag::Kind::kUniformTranslation:
      return std::min(std::abs(fp.location - fq.location) / fp.scale, 1.0);
    case FamilyTag::Kind::kPowerTranslation:
      return std::min(std::pow(std::abs(fp.location - fq.location), fp.alpha), 1.0);
    case FamilyTag::Kind::kNone: break;
  }
  return std::nullopt;
}

double tv_distance(const Measure& p, const Measure& q, DistanceMethod method) {
  if (method != DistanceMethod::kQuadrature) {
    if (auto cf = closed_form_tv(p, q)) return *cf;
    if (method == DistanceMethod::kClosedForm) {
      throw std::invalid_argument("tv_distance: no closed form for " + p.tag() + " vs " + q.tag());
    }
  }
  require_probability(p, "tv_distance");
  require_probability(q, "tv_distance");
  const PairSpace space = pair_space(p, q);
  if (space == PairSpace::kSameFinite) {
    const auto& dp = p.cell_densities();
    const auto& dq = q.cell_densities();
    double s = 0.0;
    for (std::size_t k = 0; k < dp.size(); ++k) s += std::abs(dp[k] - dq[k]) * p.reference().weight(static_cast<int>(k));
    return std::min(0.5 * s, 1.0);
  }
  if (space == PairSpace::kGaussianNd) {
    throw std::invalid_argument("tv_distance: d-dimensional measures need the closed form");
  }
  const Measure lp = line_of(p), lq = line_of(q);
  double s = 0.0;
  for (double x : atom_locations(lp, lq)) s += std::abs(lp.atom_mass(x) - lq.atom_mass(x));
  auto breaks = continuous_breaks(lp, lq);
  if (!breaks.empty()) {
    s += integrate_or_throw(
        [&](double x) { return std::abs(continuous_density(lp, x) - continuous_density(lq, x)); },
        breaks, quad_options(lp, lq), "tv_distance");
  }
  return std::clamp(0.5 * s, 0.0, 1.0);
}

double hellinger_affinity(const Measure& p, const Measure& q) {
  require_probability(p, "hellinger");
  require_probability(q, "hellinger");
  if (both_gaussian(p, q) && p.layout() != Measure::Layout::kFinite) {
    const double d = gaussian_gap(p, q);
    return std::exp(-d * d / 8.0);
  }
  const PairSpace space = pair_space(p, q);
  if (space == PairSpace::kSameFinite) {
    const auto& dp = p.cell_densities();
    const auto& dq = q.cell_densities();
    double s = 0.0;
    for (std::size_t k = 0; k < dp.size(); ++k) {
      s += std::sqrt(dp[k] * dq[k]) * p.reference().weight(static_cast<int>(k));
    }
    return std::min(s, 1.0);
  }
  if (space == PairSpace::kGaussianNd) throw std::invalid_argument("hellinger: unsupported d-dim pair");
  const Measure lp = line_of(p), lq = line_of(q);
  double s = 0.0;
  for (double x : atom_locations(lp, lq)) s += std::sqrt(lp.atom_mass(x) * lq.atom_mass(x));
  if (lp.has_continuous_part() && lq.has_continuous_part()) {
    s += integrate_or_throw(
        [&](double x) { return std::sqrt(continuous_density(lp, x) * continuous_density(lq, x)); },
        continuous_breaks(lp, lq), quad_options(lp, lq), "hellinger");
  }
  return std::clamp(s, 0.0, 1.0);
}

double hellinger_sq(const Measure& p, const Measure& q) {
  return std::clamp(1.0 - hellinger_affinity(p, q), 0.0, 1.0);
}

double kl_divergence(const Measure& p, const Measure& q) {
  require_probability(p, "kl_divergence");
  require_probability(q, "kl_divergence");
  if (both_gaussian(p, q) && p.layout() != Measure::Layout::kFinite) {
    const double d = gaussian_gap(p, q);
    return 0.5 * d * d;
  }
  const PairSpace space = pair_space(p, q);
  auto term = [](double a, double b) {
    if (a <= 0.0) return 0.0;
    if (b <= 0.0) return kInf;
    return a * std::log(a / b);
  };
  if (space == PairSpace::kSameFinite) {
    const auto& dp = p.cell_densities();
    const auto& dq = q.cell_densities();
    double s = 0.0;
    for (std::size_t k = 0; k < dp.size(); ++k) {
      s += term(dp[k], dq[k]) * p.reference().weight(static_cast<int>(k));
      if (std::isinf(s)) return kInf;
    }
    return std::max(s, 0.0);
  }
  if (space == PairSpace::kGaussianNd) throw std::invalid_argument("kl_divergence: unsupported d-dim pair");
  const Measure lp = line_of(p), lq = line_of(q);
  double s = 0.0;
  for (const Atom& a : lp.atoms()) {
    s += term(a.mass, lq.atom_mass(a.x));
    if (std::isinf(s)) return kInf;
  }
  if (lp.has_continuous_part()) {
    if (!lq.has_continuous_part()) return kInf;
    bool undominated = false;
    // Points where q vanishes but p carries non-negligible density make the
    // divergence infinite; tiny p values there are treated as underflow.
    const double v = integrate_or_throw(
        [&](double x) {
          const double a = continuous_density(lp, x);
          const double b = continuous_density(lq, x);
          if (a <= 0.0) return 0.0;
          if (b <= 0.0) {
            if (a > 1e-250) undominated = true;
            return 0.0;
          }
          return a * std::log(a / b);
        },
        continuous_breaks(lp, lq), quad_options(lp, lq), "kl_divergence");
    if (undominated) return kInf;
    s += v;
  }
  return std::max(s, 0.0);
}

std::vector<double> probe_grid(const Measure& p, const Measure& q, std::size_t count) {
  std::vector<double> g;
  const PairSpace space = pair_space(p, q);
  if (space == PairSpace::kSameFinite) {
    const ReferenceMeasure& ref = p.reference();
    if (ref.kind() == ReferenceMeasure::Kind::kDiscrete) return sorted_unique(ref.points());
    const auto e = ref.edges();
    for (std::size_t i = 0; i + 1 < e.size(); ++i) g.push_back(0.5 * (e[i] + e[i + 1]));
    return g;
  }
  if (space == PairSpace::kGaussianNd) throw std::invalid_argument("probe_grid: 1-d only");
  const Measure lp = line_of(p), lq = line_of(q);
  double lo = kInf, hi = -kInf;
  for (const Measure* m : {&lp, &lq}) {
    auto [a, b] = m->effective_range();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    auto bp = m->breakpoints();
    g.insert(g.end(), bp.begin(), bp.end());
    for (const auto& [w, c] : m->components()) {
      const std::size_t nq = std::max<std::size_t>(count / 4, 16);
      for (std::size_t i = 0; i < nq; ++i) g.push_back(c.quantile((i + 0.5) / static_cast<double>(nq)));
      for (double x : c.breakpoints()) {
        // Points just inside each breakpoint catch one-sided behaviour.
        g.push_back(std::nextafter(x, kInf));
        g.push_back(std::nextafter(x, -kInf));
      }
    }
  }
  if (std::isfinite(lo) && std::isfinite(hi) && lo < hi) {
    auto lin = linspace(lo, hi, count);
    g.insert(g.end(), lin.begin(), lin.end());
  }
  g.erase(std::remove_if(g.begin(), g.end(), [](double x) { return !std::isfinite(x); }), g.end());
  return sorted_unique(std::move(g));
}

TvSets tv_sets(const Measure& p, const Measure& q) {
  TvSets s;
  const PairSpace space = pair_space(p, q);
  if (space == PairSpace::kSameFinite) {
    const auto pp = p.cell_probs();
    const auto qq = q.cell_probs();
    const auto& dp = p.cell_densities();
    const auto& dq = q.cell_densities();
    for (std::size_t k = 0; k < dp.size(); ++k) {
      if (dp[k] > dq[k]) {
        s.p_of_a += pp[k];
        s.q_of_a += qq[k];
      } else if (dq[k] > dp[k]) {
        s.p_of_b += pp[k];
        s.q_of_b += qq[k];
      }
    }
    return s;
  }
  if (space == PairSpace::kGaussianNd) {
    if (!both_gaussian(p, q)) throw std::invalid_argument("tv_sets: unsupported d-dim pair");
    const double d = gaussian_gap(p, q);
    if (d == 0.0) return s;
    s.p_of_a = s.q_of_b = normal_cdf(0.5 * d);
    s.q_of_a = s.p_of_b = normal_cdf(-0.5 * d);
    return s;
  }
  const Measure lp = line_of(p), lq = line_of(q);
  const FamilyTag& fp = lp.family();
  const FamilyTag& fq = lq.family();
  if (fp.same_family(fq)) {
    if (fp.location == fq.location) {
      s.a = IntervalSet{};
      s.b = IntervalSet{};
      return s;
    }
    std::pair<IntervalSet, IntervalSet> ab;
    if (fp.location < fq.location) {
      ab = ordered_translation_sets(fp, fq);
    } else {
      auto ba = ordered_translation_sets(fq, fp);
      ab = {ba.second, ba.first};
    }
    for (const Interval& iv : ab.first) {
      s.p_of_a += interval_prob(lp, iv);
      s.q_of_a += interval_prob(lq, iv);
    }
    for (const Interval& iv : ab.second) {
      s.p_of_b += interval_prob(lp, iv);
      s.q_of_b += interval_prob(lq, iv);
    }
    s.a = std::move(ab.first);
    s.b = std::move(ab.second);
    return s;
  }

  for (double x : atom_locations(lp, lq)) {
    const double a = lp.atom_mass(x), b = lq.atom_mass(x);
    if (a > b) {
      s.p_of_a += a;
      s.q_of_a += b;
    } else if (b > a) {
      s.p_of_b += a;
      s.q_of_b += b;
    }
  }
  auto breaks = continuous_breaks(lp, lq);
  if (breaks.empty()) return s;
  auto diff = [&](double x) { return continuous_density(lp, x) - continuous_density(lq, x); };
  auto probes = probe_grid(lp, lq);
  auto cuts = sign_changes(diff, probes);
  cuts.insert(cuts.end(), breaks.begin(), breaks.end());
  cuts = sorted_unique(std::move(cuts));
  const QuadratureOptions qo = quad_options(lp, lq);
  auto mass_on = [&](const Measure& m, double lo, double hi) {
    bool has_cdf = true;
    double v = 0.0;
    for (const auto& [w, c] : m.components()) {
      if (!c.has_cdf()) {
        has_cdf = false;
        break;
      }
      v += w * (c.cdf(hi) - c.cdf(lo));
    }
    if (has_cdf) return v;
    return integrate_or_throw([&](double x) { return continuous_density(m, x); }, {lo, hi}, qo,
                              "tv_sets");
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    double mid;
    if (std::isinf(lo) && std::isinf(hi)) {
      mid = 0.0;
    } else if (std::isinf(lo)) {
      mid = hi - 1.0 - std::abs(hi);
    } else if (std::isinf(hi)) {
      mid = lo + 1.0 + std::abs(lo);
    } else {
      mid = 0.5 * (lo + hi);
    }
    const double sg = sign_of(diff(mid));
    if (sg > 0.0) {
      s.p_of_a += mass_on(lp, lo, hi);
      s.q_of_a += mass_on(lq, lo, hi);
    } else if (sg < 0.0) {
      s.p_of_b += mass_on(lp, lo, hi);
      s.q_of_b += mass_on(lq, lo, hi);
    }
  }
  return s;
}

double expectation(const Measure& m, const std::function<double(double)>& f,
                   std::vector<double> extra_breakpoints) {
  if (m.layout() == Measure::Layout::kGaussianNd) {
    throw std::invalid_argument("expectation: 1-d measures only");
  }
  if (m.layout() == Measure::Layout::kFinite &&
      m.reference().kind() == ReferenceMeasure::Kind::kDiscrete) {
    const auto probs = m.cell_probs();
    double s = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k] != 0.0) s += probs[k] * f(m.reference().points()[k]);
    }
    return s;
  }
  Measure line;
  if (m.layout() == Measure::Layout::kFinite) {
    // Signed histograms have no line view; integrate cell by cell.
    const auto e = m.reference().edges();
    const auto& d = m.cell_densities();
    const double width = m.reference().hi() - m.reference().lo();
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      if (d[k] == 0.0) continue;
      std::vector<double> bp{e[k], e[k + 1]};
      for (double x : extra_breakpoints) {
        if (x > e[k] && x < e[k + 1]) bp.push_back(x);
      }
      s += d[k] / width * integrate_or_throw(f, bp, {}, "expectation");
    }
    return s;
  }
  line = m;
  double s = 0.0;
  for (const Atom& a : line.atoms()) s += a.mass * f(a.x);
  if (line.has_continuous_part()) {
    auto bp = continuous_breaks(line, line);
    const double lo = bp.front(), hi = bp.back();
    for (double x : extra_breakpoints) {
      if (x > lo && x < hi) bp.push_back(x);
    }
    s += integrate_or_throw([&](double x) { return f(x) * continuous_density(line, x); }, bp,
                            quad_options(line, line), "expectation");
  }
  return s;
}

double WassersteinPieces::distance() const {
  double s = 0.0;
  for (double v : int_diff) s += std::abs(v);
  return s;
}

double WassersteinPieces::upper_sign_integral(double x) const {
  if (x <= knots.front()) return tail.front();
  if (x >= knots.back()) return 0.0;
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - knots.begin()) - 1;
  return signs[k] * (knots[k + 1] - x) + tail[k + 1];
}

WassersteinPieces wasserstein_pieces(const Measure& p, const Measure& q) {
  for (const Measure* m : {&p, &q}) {
    if (m->dimension() != 1 || m->is_signed() || !m->has_cdf()) {
      throw std::invalid_argument("wasserstein: need 1-d probability measures with CDFs");
    }
    auto [lo, hi] = m->support();
    if (lo < -1e-12 || hi > 1.0 + 1e-12) {
      throw std::invalid_argument("wasserstein: support of " + m->tag() + " is outside [0,1]");
    }
  }
  const Measure lp = line_of(p), lq = line_of(q);
  std::vector<double> b{0.0, 1.0};
  for (const Measure* m : {&lp, &lq}) {
    for (double x : m->breakpoints()) {
      if (x > 0.0 && x < 1.0) b.push_back(x);
    }
  }
  b = sorted_unique(std::move(b));
  const bool linear = lp.cdf_is_piecewise_linear() && lq.cdf_is_piecewise_linear();
  const QuadratureOptions qo = quad_options(lp, lq);

  WassersteinPieces w;
  w.knots.push_back(0.0);
  auto add_piece = [&w](double hi, double diff_int, double mid_int, double sign) {
    w.knots.push_back(hi);
    w.signs.push_back(sign);
    w.int_diff.push_back(diff_int);
    w.int_mid.push_back(mid_int);
  };
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double lo = b[i], hi = b[i + 1];
    const double len = hi - lo;
    if (linear) {
      const double fp0 = lp.cdf(lo), fq0 = lq.cdf(lo);
      const double fp1 = lp.cdf_left(hi), fq1 = lq.cdf_left(hi);
      const double d0 = fq0 - fp0, d1 = fq1 - fp1;
      const double m0 = 0.5 * (fp0 + fq0), m1 = 0.5 * (fp1 + fq1);
      if (d0 * d1 < 0.0) {
        const double frac = d0 / (d0 - d1);
        const double r = lo + len * frac;
        const double mr = m0 + (m1 - m0) * frac;
        if (r > lo && r < hi) {
          add_piece(r, 0.5 * d0 * (r - lo), 0.5 * (m0 + mr) * (r - lo), sign_of(d0));
          add_piece(hi, 0.5 * d1 * (hi - r), 0.5 * (mr + m1) * (hi - r), sign_of(d1));
          continue;
        }
      }
      add_piece(hi, 0.5 * (d0 + d1) * len, 0.5 * (m0 + m1) * len, sign_of(d0 + d1));
      continue;
    }
    auto diff = [&](double t) { return lq.cdf(t) - lp.cdf(t); };
    auto mid = [&](double t) { return 0.5 * (lp.cdf(t) + lq.cdf(t)); };
    auto probes = linspace(lo, hi, 257);
    probes.front() = std::nextafter(lo, hi);
    probes.back() = std::nextafter(hi, lo);
    auto cuts = sign_changes(diff, probes);
    cuts.insert(cuts.begin(), lo);
    cuts.push_back(hi);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], c = cuts[k + 1];
      if (!(c > a)) continue;
      const double di = integrate_or_throw(diff, {a, c}, qo, "wasserstein");
      const double mi = integrate_or_throw(mid, {a, c}, qo, "wasserstein");
      add_piece(c, di, mi, sign_of(diff(0.5 * (a + c))));
    }
  }
  w.tail.assign(w.knots.size(), 0.0);
  for (std::size_t k = w.signs.size(); k-- > 0;) {
    w.tail[k] = w.tail[k + 1] + w.signs[k] * (w.knots[k + 1] - w.knots[k]);
  }
  return w;
}

double wasserstein1(const Measure& p, const Measure& q) {
  return std::clamp(wasserstein_pieces(p, q).distance(), 0.0, 1.0);
}

double lj_distance(const Measure& p, const Measure& q, double j) {
  if (!(j > 1.0)) throw std::invalid_argument("lj_distance: j must lie in (1, inf]");
  const PairSpace space = pair_space(p, q);
  if (space == PairSpace::kSameFinite) {
    const auto& dp = p.cell_densities();
    const auto& dq = q.cell_densities();
    if (std::isinf(j)) {
      double m = 0.0;
      for (std::size_t k = 0; k < dp.size(); ++k) m = std::max(m, std::abs(dp[k] - dq[k]));
      return m;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < dp.size(); ++k) {
      s += std::pow(std::abs(dp[k] - dq[k]), j) * p.reference().weight(static_cast<int>(k));
    }
    return std::pow(s, 1.0 / j);
  }
  if (space == PairSpace::kGaussianNd) throw std::invalid_argument("lj_distance: unsupported d-dim pair");
  if (p.is_signed() || q.is_signed()) {
    throw std::invalid_argument("lj_distance: signed measures must share a finite reference");
  }
  const Measure lp = line_of(p), lq = line_of(q);
  if (!lp.atoms().empty() || !lq.atoms().empty()) {
    throw std::invalid_argument("lj_distance: measures with atoms have no Lebesgue density");
  }
  auto diff = [&](double x) { return std::abs(continuous_density(lp, x) - continuous_density(lq, x)); };
  if (std::isinf(j)) {
    double m = 0.0;
    for (double x : probe_grid(lp, lq)) m = std::max(m, diff(x));
    return m;
  }
  const double s = integrate_or_throw([&](double x) { return std::pow(diff(x), j); },
                                      continuous_breaks(lp, lq), quad_options(lp, lq),
                                      "lj_distance (non-integrable difference?)");
  return std::pow(s, 1.0 / j);
}

}  // namespace ellest
