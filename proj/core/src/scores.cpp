#include "ellest/scores.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellest {

struct ScoreFunction::Data {
  PairSpace space = PairSpace::kLine;
  Measure p;
  Measure q;
  double c0 = 0.0;  // constant part before sign
  // TV
  std::optional<IntervalSet> set_a;
  std::optional<IntervalSet> set_b;
  // Hellinger
  double hk = 0.0;
  // KL
  double inv2a = 0.0;
  // L_j
  double lj_scale = 0.0;
  double lj_normpow = 1.0;
  double j = 2.0;
  // L_inf
  int istar = -1;
  double lsign = 0.0;
  double lc = 0.0;
  // Wasserstein
  WassersteinPieces pieces;
  double wc = 0.0;
  // Variational
  std::function<double(double)> f;
  double vb = 1.0;
  double vc = 0.0;
};

ScoreFunction make_score_function(ScoreKind kind, FamilyConstants c,
                                  std::shared_ptr<const ScoreFunction::Data> data) {
  ScoreFunction s;
  s.kind_ = kind;
  s.constants_ = c;
  s.data_ = std::move(data);
  return s;
}

namespace {

using Data = ScoreFunction::Data;

constexpr double kHk = 0.35355339059327373;  // 1/(2 sqrt 2)

Measure line_of(const Measure& m) {
  return m.layout() == Measure::Layout::kLine ? m : m.as_line();
}

std::shared_ptr<Data> new_pair_data(const Measure& p, const Measure& q) {
  auto d = std::make_shared<Data>();
  d->space = pair_space(p, q);
  if (d->space == PairSpace::kLine) {
    d->p = line_of(p);
    d->q = line_of(q);
  } else {
    d->p = p;
    d->q = q;
  }
  return d;
}

PairDensity densities_at(const Data& d, double x) {
  return pair_density(d.p, d.q, d.space, x);
}

double sign_indicator(double p, double q) { return (q > p ? 0.5 : 0.0) - (p > q ? 0.5 : 0.0); }

std::size_t count_in(const IntervalSet& set, const std::vector<double>& sorted) {
  std::size_t total = 0;
  for (const Interval& iv : set) {
    auto lo = iv.lo_closed ? std::lower_bound(sorted.begin(), sorted.end(), iv.lo)
                           : std::upper_bound(sorted.begin(), sorted.end(), iv.lo);
    auto hi = iv.hi_closed ? std::upper_bound(sorted.begin(), sorted.end(), iv.hi)
                           : std::lower_bound(sorted.begin(), sorted.end(), iv.hi);
    if (hi > lo) total += static_cast<std::size_t>(hi - lo);
  }
  return total;
}

bool piecewise_constant_line(const Measure& m) {
  if (!m.atoms().empty()) return false;
  for (const auto& [w, c] : m.components()) {
    const bool flat = c.kind == Component::Kind::kUniform || c.kind == Component::Kind::kPiecewiseConstant ||
                      (c.kind == Component::Kind::kPower && c.b == 1.0);
    if (!flat) return false;
  }
  return true;
}

// Exact TV sets for two piecewise-constant laws on the line.
std::optional<TvSets> piecewise_constant_sets(const Measure& lp, const Measure& lq) {
  if (!piecewise_constant_line(lp) || !piecewise_constant_line(lq)) return std::nullopt;
  std::vector<double> e = lp.breakpoints();
  auto eq = lq.breakpoints();
  e.insert(e.end(), eq.begin(), eq.end());
  e = sorted_unique(std::move(e));
  TvSets s;
  s.a = IntervalSet{};
  s.b = IntervalSet{};
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const double lo = e[i], hi = e[i + 1];
    const double mid = 0.5 * (lo + hi);
    const double dp = lp.density(mid), dq = lq.density(mid);
    if (dp == dq) continue;
    const double pm = lp.cdf(hi) - lp.cdf(lo);
    const double qm = lq.cdf(hi) - lq.cdf(lo);
    // Cells are half-open [lo, hi) except the power(1) law living on (t, t+1].
    Interval iv{lo, hi, true, false};
    if (dp > dq) {
      s.p_of_a += pm;
      s.q_of_a += qm;
      s.a->push_back(iv);
    } else {
      s.p_of_b += pm;
      s.q_of_b += qm;
      s.b->push_back(iv);
    }
  }
  // The interval form must agree with pointwise density comparisons; power(1)
  // has the opposite end convention, so drop the interval form in that case.
  for (const Measure* m : {&lp, &lq}) {
    for (const auto& [w, c] : m->components()) {
      if (c.kind == Component::Kind::kPower) {
        s.a.reset();
        s.b.reset();
      }
    }
  }
  return s;
}

void require_nonnegative(const Measure& m, const char* what) {
  if (m.is_signed()) {
    for (double v : m.cell_densities()) {
      if (v < 0.0) throw std::invalid_argument(std::string(what) + ": negative density");
    }
  }
}

double continuous_density(const Measure& line, double x) {
  double d = 0.0;
  for (const auto& [w, c] : line.components()) d += w * c.pdf(x);
  return d;
}

QuadratureOptions pair_quad_options(const Measure& a, const Measure& b) {
  QuadratureOptions o;
  for (const Measure* m : {&a, &b}) {
    auto s = m->singular_points();
    o.singular_left.insert(o.singular_left.end(), s.begin(), s.end());
  }
  return o;
}

std::vector<double> pair_breaks(const Measure& a, const Measure& b) {
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

// Integral of g(p(x), q(x)) against the common dominating measure.
double pair_integral(const Data& d, const std::function<double(double, double)>& g) {
  if (d.space == PairSpace::kSameFinite) {
    const auto& dp = d.p.cell_densities();
    const auto& dq = d.q.cell_densities();
    double s = 0.0;
    for (std::size_t k = 0; k < dp.size(); ++k) {
      s += g(dp[k], dq[k]) * d.p.reference().weight(static_cast<int>(k));
    }
    return s;
  }
  if (d.space == PairSpace::kGaussianNd) {
    throw std::invalid_argument("score: integrals over d-dimensional spaces are not supported");
  }
  double s = 0.0;
  std::vector<double> xs;
  for (const Atom& a : d.p.atoms()) xs.push_back(a.x);
  for (const Atom& a : d.q.atoms()) xs.push_back(a.x);
  for (double x : sorted_unique(std::move(xs))) s += g(d.p.atom_mass(x), d.q.atom_mass(x));
  auto breaks = pair_breaks(d.p, d.q);
  if (!breaks.empty()) {
    s += integrate_or_throw(
        [&](double x) { return g(continuous_density(d.p, x), continuous_density(d.q, x)); }, breaks,
        pair_quad_options(d.p, d.q), "score constant");
  }
  return s;
}

// Max of h(p, q) over the probe points (exact over cells for finite spaces).
double pair_sup(const Data& d, const std::function<double(double, double)>& h, std::size_t probes) {
  double m = -kInf;
  if (d.space == PairSpace::kSameFinite) {
    const auto& dp = d.p.cell_densities();
    const auto& dq = d.q.cell_densities();
    for (std::size_t k = 0; k < dp.size(); ++k) m = std::max(m, h(dp[k], dq[k]));
    return m;
  }
  if (d.space == PairSpace::kGaussianNd) return m;
  for (double x : probe_grid(d.p, d.q, probes)) {
    const PairDensity pd = densities_at(d, x);
    m = std::max(m, h(pd.p, pd.q));
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation

double ScoreFunction::constant_part() const {
  if (!data_) return 0.0;
  return sign_ * data_->c0;
}

bool ScoreFunction::density_based() const {
  return kind_ == ScoreKind::kTv || kind_ == ScoreKind::kHellinger || kind_ == ScoreKind::kKl ||
         kind_ == ScoreKind::kLj;
}

double ScoreFunction::from_densities(double p, double q) const {
  const Data& d = *data_;
  switch (kind_) {
    case ScoreKind::kTv: return sign_ * (d.c0 + sign_indicator(p, q));
    case ScoreKind::kHellinger: {
      const double r = 0.5 * (p + q);
      const double v = r > 0.0 ? (std::sqrt(q) - std::sqrt(p)) / std::sqrt(r) : 0.0;
      return sign_ * (d.c0 + d.hk * v);
    }
    case ScoreKind::kKl: {
      if (p == q) return 0.0;
      return sign_ * d.inv2a * (std::log(q) - std::log(p));
    }
    case ScoreKind::kLj: {
      const double diff = p - q;
      const double f = sign_of(diff) * std::pow(std::abs(diff), d.j - 1.0) / d.lj_normpow;
      return sign_ * (d.c0 - d.lj_scale * f);
    }
    default: throw std::logic_error("from_densities: score is not density based");
  }
}

double ScoreFunction::operator()(double x) const {
  switch (kind_) {
    case ScoreKind::kZero: return 0.0;
    case ScoreKind::kTv:
    case ScoreKind::kHellinger:
    case ScoreKind::kKl:
    case ScoreKind::kLj: {
      if (data_->space == PairSpace::kGaussianNd) {
        return (*this)(std::span<const double>(&x, 1));
      }
      if (kind_ == ScoreKind::kTv && data_->set_a) {
        const bool in_a = std::any_of(data_->set_a->begin(), data_->set_a->end(),
                                      [x](const Interval& iv) { return iv.contains(x); });
        const bool in_b = std::any_of(data_->set_b->begin(), data_->set_b->end(),
                                      [x](const Interval& iv) { return iv.contains(x); });
        return sign_ * (data_->c0 + (in_b ? 0.5 : 0.0) - (in_a ? 0.5 : 0.0));
      }
      const PairDensity pd = densities_at(*data_, x);
      return from_densities(pd.p, pd.q);
    }
    case ScoreKind::kLinf: {
      const int cell = data_->p.reference().cell_of(x);
      return sign_ * data_->lsign * (data_->lc - (cell == data_->istar ? 1.0 : 0.0));
    }
    case ScoreKind::kWasserstein:
      return sign_ * (data_->pieces.upper_sign_integral(x) - data_->wc);
    case ScoreKind::kVariational:
      return sign_ * (data_->vc - data_->f(x)) / data_->vb;
  }
  return 0.0;
}

double ScoreFunction::operator()(std::span<const double> x) const {
  if (kind_ == ScoreKind::kZero) return 0.0;
  if (x.size() == 1 && (!data_ || data_->space != PairSpace::kGaussianNd)) return (*this)(x[0]);
  if (!density_based() || data_->space != PairSpace::kGaussianNd) {
    throw std::invalid_argument("score: d-dimensional evaluation needs a d-dimensional pair");
  }
  return from_densities(data_->p.density(x), data_->q.density(x));
}

bool ScoreFunction::has_interval_form() const {
  return kind_ == ScoreKind::kTv && data_ && data_->set_a.has_value();
}

double ScoreFunction::sum_sorted(const std::vector<double>& sorted, const std::vector<double>* prefix) const {
  if (kind_ == ScoreKind::kZero) return 0.0;
  if (has_interval_form()) {
    const double n = static_cast<double>(sorted.size());
    const double in_a = static_cast<double>(count_in(*data_->set_a, sorted));
    const double in_b = static_cast<double>(count_in(*data_->set_b, sorted));
    return sign_ * (n * data_->c0 + 0.5 * (in_b - in_a));
  }
  if (kind_ == ScoreKind::kWasserstein && prefix != nullptr && prefix->size() == sorted.size() + 1) {
    // S(x) is continuous and linear between knots, so sums only need counts
    // and partial sums of the sample per piece.
    const WassersteinPieces& w = data_->pieces;
    auto pos = [&sorted](double x) {
      return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
    };
    std::size_t left = pos(w.knots.front());
    double s = static_cast<double>(left) * w.tail.front();
    for (std::size_t k = 0; k + 1 < w.knots.size(); ++k) {
      const std::size_t right = pos(w.knots[k + 1]);
      if (right > left) {
        const double cnt = static_cast<double>(right - left);
        const double sx = (*prefix)[right] - (*prefix)[left];
        s += cnt * (w.signs[k] * w.knots[k + 1] + w.tail[k + 1]) - w.signs[k] * sx;
      }
      left = right;
    }
    return sign_ * (s - static_cast<double>(sorted.size()) * data_->wc);
  }
  double s = 0.0;
  for (double x : sorted) s += (*this)(x);
  return s;
}

double ScoreFunction::sum(const Sample& sample) const {
  if (sample.dim() == 1) return sum_sorted(sample.sorted());
  double s = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) s += (*this)(sample.point(i));
  return s;
}

ScoreFunction ScoreFunction::negated() const {
  ScoreFunction s = *this;
  s.sign_ = -sign_;
  return s;
}

// ---------------------------------------------------------------------------
// Constructors

FamilyConstants family_constants(const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::kTv:
    case LossKind::kWasserstein: return {1.5, 0.5, std::nullopt, 1.0};
    case LossKind::kHellinger:
      return {(std::numbers::sqrt2 + 1.0) / 2.0, (std::numbers::sqrt2 - 1.0) / 2.0, 1.5, 1.0};
    case LossKind::kKl: {
      const double a = spec.kl_a;
      if (!(a > 0.0)) throw std::invalid_argument("KL family: a must be > 0");
      return {0.5 / a, 0.5 / a, 1.0 / (a * std::min(2.0, a)), 1.0};
    }
    case LossKind::kLj: {
      if (!(spec.ratio_r > 0.0)) throw std::invalid_argument("L_j family: ratio bound R must be > 0");
      const double rj = std::pow(spec.ratio_r, spec.j - 1.0);
      return {0.75 / rj, 0.25 / rj, std::nullopt, 2.0 * rj};
    }
    case LossKind::kLinf: {
      if (spec.cells < 2) throw std::invalid_argument("L_inf family: need D >= 2");
      const double d = spec.cells;
      return {1.5 / d, 0.5 / d, std::nullopt, d};
    }
  }
  return {};
}

ScoreFunction zero_score(FamilyConstants constants) {
  return make_score_function(ScoreKind::kZero, constants, nullptr);
}

ScoreFunction tv_score(const Measure& p, const Measure& q, const ScoreOptions&) {
  auto d = new_pair_data(p, q);
  TvSets sets;
  std::optional<TvSets> flat;
  if (d->space == PairSpace::kLine) flat = piecewise_constant_sets(d->p, d->q);
  sets = flat ? *flat : tv_sets(d->p, d->q);
  d->c0 = 0.5 * (sets.p_of_a - sets.q_of_b);
  if (sets.a && sets.b) {
    d->set_a = std::move(sets.a);
    d->set_b = std::move(sets.b);
  }
  return make_score_function(ScoreKind::kTv, family_constants(LossSpec::tv()), d);
}

ScoreFunction hellinger_score(const Measure& p, const Measure& q, const ScoreOptions&) {
  require_nonnegative(p, "hellinger_score");
  require_nonnegative(q, "hellinger_score");
  auto d = new_pair_data(p, q);
  d->hk = kHk;
  const double rho_p = pair_integral(*d, [](double a, double b) { return std::sqrt(0.5 * (a + b) * a); });
  const double rho_q = pair_integral(*d, [](double a, double b) { return std::sqrt(0.5 * (a + b) * b); });
  d->c0 = kHk * (rho_q - rho_p);
  return make_score_function(ScoreKind::kHellinger, family_constants(LossSpec::hellinger()), d);
}

ScoreFunction kl_score(const Measure& p, const Measure& q, double a, const ScoreOptions& opts) {
  if (!(a > 0.0)) throw std::invalid_argument("kl_score: a must be > 0");
  require_nonnegative(p, "kl_score");
  require_nonnegative(q, "kl_score");
  auto d = new_pair_data(p, q);
  d->inv2a = 0.5 / a;
  if (opts.validate) {
    const double worst = pair_sup(
        *d,
        [](double x, double y) {
          if (x == y) return 0.0;
          if (x <= 0.0 || y <= 0.0) return kInf;
          return std::abs(std::log(x / y));
        },
        opts.probe_count);
    if (worst > a * (1.0 + 1e-12)) {
      throw std::invalid_argument("kl_score: |log(p/q)| reaches " + std::to_string(worst) +
                                  " > a = " + std::to_string(a) + " for " + p.tag() + " vs " + q.tag());
    }
  }
  return make_score_function(ScoreKind::kKl, family_constants(LossSpec::kl(a)), d);
}

ScoreFunction lj_score(const Measure& p, const Measure& q, double j, double ratio_r,
                       const ScoreOptions& opts) {
  if (!(j > 1.0) || std::isinf(j)) throw std::invalid_argument("lj_score: j must lie in (1, inf)");
  if (!(ratio_r > 0.0)) throw std::invalid_argument("lj_score: R must be > 0");
  const FamilyConstants fc = family_constants(LossSpec::lj(j, ratio_r));
  const double norm = lj_distance(p, q, j);
  if (norm == 0.0) return zero_score(fc);
  auto d = new_pair_data(p, q);
  d->j = j;
  d->lj_normpow = std::pow(norm, j - 1.0);
  d->lj_scale = 0.5 / std::pow(ratio_r, j - 1.0);
  if (opts.validate) {
    const double sup = pair_sup(*d, [](double x, double y) { return std::abs(x - y); }, opts.probe_count);
    if (sup > ratio_r * norm * (1.0 + 1e-9)) {
      throw std::invalid_argument("lj_score: ratio bound violated, ||p-q||_inf = " + std::to_string(sup) +
                                  " > R ||p-q||_j = " + std::to_string(ratio_r * norm));
    }
  }
  const double jj = j;
  const double normpow = d->lj_normpow;
  const double c = pair_integral(*d, [jj, normpow](double a, double b) {
    const double diff = a - b;
    return sign_of(diff) * std::pow(std::abs(diff), jj - 1.0) / normpow * 0.5 * (a + b);
  });
  d->c0 = d->lj_scale * c;
  return make_score_function(ScoreKind::kLj, fc, d);
}

ScoreFunction linf_score(const Measure& p, const Measure& q, const ScoreOptions&) {
  if (p.layout() != Measure::Layout::kFinite || q.layout() != Measure::Layout::kFinite ||
      p.reference() != q.reference()) {
    throw std::invalid_argument("linf_score: P and Q must share the same partition");
  }
  const ReferenceMeasure& ref = p.reference();
  if (!ref.has_equal_weights()) throw std::invalid_argument("linf_score: cells must have equal reference mass");
  const FamilyConstants fc = family_constants(LossSpec::linf(ref.cells()));
  auto d = new_pair_data(p, q);
  const auto pp = p.cell_probs();
  const auto qq = q.cell_probs();
  double best = -1.0;
  for (std::size_t k = 0; k < pp.size(); ++k) {
    const double gap = std::abs(pp[k] - qq[k]);
    if (gap > best) {
      best = gap;
      d->istar = static_cast<int>(k);
    }
  }
  const std::size_t i = static_cast<std::size_t>(d->istar);
  d->lsign = sign_of(pp[i] - qq[i]);
  d->lc = 0.5 * (pp[i] + qq[i]);
  d->c0 = d->lsign * d->lc;
  return make_score_function(ScoreKind::kLinf, fc, d);
}

ScoreFunction wasserstein_score(const Measure& p, const Measure& q, const ScoreOptions&) {
  auto d = std::make_shared<Data>();
  d->space = PairSpace::kLine;
  d->p = p;
  d->q = q;
  d->pieces = wasserstein_pieces(p, q);
  double c = 0.0;
  for (std::size_t k = 0; k < d->pieces.signs.size(); ++k) c += d->pieces.signs[k] * d->pieces.int_mid[k];
  d->wc = c;
  d->c0 = -c;
  return make_score_function(ScoreKind::kWasserstein, family_constants(LossSpec::wasserstein()), d);
}

ScoreFunction variational_score(const Measure& p, const Measure& q, std::function<double(double)> f,
                                double b, std::vector<double> breakpoints, const ScoreOptions& opts) {
  if (!(b > 0.0)) throw std::invalid_argument("variational_score: b must be > 0");
  if (!f) throw std::invalid_argument("variational_score: missing witness");
  FamilyConstants fc{1.5 / b, 0.5 / b, std::nullopt, b};
  auto d = std::make_shared<Data>();
  d->space = pair_space(p, q);
  d->p = p;
  d->q = q;
  if (opts.validate && d->space != PairSpace::kGaussianNd) {
    double lo = kInf, hi = -kInf;
    auto grid = probe_grid(p, q, opts.probe_count);
    grid.insert(grid.end(), breakpoints.begin(), breakpoints.end());
    for (double x : grid) {
      const double v = f(x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > b * (1.0 + 1e-12)) {
      throw std::invalid_argument("variational_score: witness oscillation " + std::to_string(hi - lo) +
                                  " exceeds b = " + std::to_string(b));
    }
  }
  d->vc = 0.5 * (expectation(p, f, breakpoints) + expectation(q, f, breakpoints));
  d->vb = b;
  d->f = std::move(f);
  d->c0 = d->vc / b;
  return make_score_function(ScoreKind::kVariational, fc, d);
}

std::function<double(double)> tv_witness(const Measure& p, const Measure& q) {
  auto d = new_pair_data(p, q);
  return [d](double x) {
    const PairDensity pd = densities_at(*d, x);
    return -sign_indicator(pd.p, pd.q);
  };
}

std::vector<double> tv_witness_breakpoints(const Measure& p, const Measure& q) {
  auto d = new_pair_data(p, q);
  if (d->space != PairSpace::kLine) return {};
  std::vector<double> out = d->p.breakpoints();
  auto bq = d->q.breakpoints();
  out.insert(out.end(), bq.begin(), bq.end());
  auto diff = [&d](double x) { return continuous_density(d->p, x) - continuous_density(d->q, x); };
  auto cuts = sign_changes(diff, probe_grid(d->p, d->q));
  out.insert(out.end(), cuts.begin(), cuts.end());
  out.erase(std::remove_if(out.begin(), out.end(), [](double x) { return !std::isfinite(x); }), out.end());
  return sorted_unique(std::move(out));
}

std::function<double(double)> wasserstein_witness(const Measure& p, const Measure& q) {
  auto pieces = std::make_shared<WassersteinPieces>(wasserstein_pieces(p, q));
  return [pieces](double x) { return pieces->tail.front() - pieces->upper_sign_integral(x); };
}

std::vector<double> wasserstein_witness_breakpoints(const Measure& p, const Measure& q) {
  return wasserstein_pieces(p, q).knots;
}

ScoreFunction make_score(const LossSpec& spec, const Measure& p, const Measure& q,
                         const ScoreOptions& opts) {
  switch (spec.kind) {
    case LossKind::kTv: return tv_score(p, q, opts);
    case LossKind::kHellinger: return hellinger_score(p, q, opts);
    case LossKind::kKl: return kl_score(p, q, spec.kl_a, opts);
    case LossKind::kWasserstein: return wasserstein_score(p, q, opts);
    case LossKind::kLj: return lj_score(p, q, spec.j, spec.ratio_r, opts);
    case LossKind::kLinf: return linf_score(p, q, opts);
  }
  throw std::logic_error("make_score: unknown loss");
}

}  // namespace ellest
