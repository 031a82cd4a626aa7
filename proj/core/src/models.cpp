#include "ellest/models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "ellest/distances.hpp"

namespace ellest {

std::string to_string(TranslationBase b) {
  switch (b) {
    case TranslationBase::kGaussian: return "gaussian";
    case TranslationBase::kCauchy: return "cauchy";
    case TranslationBase::kUniform: return "uniform";
    case TranslationBase::kPower: return "power";
  }
  return "gaussian";
}

TranslationBase translation_base_from_string(const std::string& s) {
  static const std::map<std::string, TranslationBase> m = {{"gaussian", TranslationBase::kGaussian},
                                                           {"cauchy", TranslationBase::kCauchy},
                                                           {"uniform", TranslationBase::kUniform},
                                                           {"power", TranslationBase::kPower}};
  auto it = m.find(s);
  if (it == m.end()) throw std::invalid_argument("unknown translation base '" + s + "'");
  return it->second;
}

Measure translated(TranslationBase base, double theta, double scale, double alpha) {
  switch (base) {
    case TranslationBase::kGaussian: return Measure::gaussian(theta, scale);
    case TranslationBase::kCauchy: return Measure::cauchy(theta, scale);
    case TranslationBase::kUniform: return Measure::uniform_translation(theta, scale);
    case TranslationBase::kPower: return Measure::power_translation(alpha, theta);
  }
  throw std::logic_error("translated: unknown base");
}

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw std::invalid_argument("grid: need finite lo <= hi and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw std::invalid_argument("grid: too many points");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

Model gaussian_location_grid(int d, double lo, double hi, double step) {
  if (d < 1) throw std::invalid_argument("gaussian-location-grid: d must be >= 1");
  const auto g = grid(lo, hi, step);
  ModelMetadata meta;
  meta.family = "gaussian-location-grid";
  meta.vc_dimension = d + 1;
  meta.resolution = step;
  std::vector<Measure> cands;
  if (d == 1) {
    for (double m : g) cands.push_back(Measure::gaussian(m));
    meta.parameters = g;
    return Model(std::move(cands), std::move(meta));
  }
  double total = std::pow(static_cast<double>(g.size()), d);
  if (total > 1e6) throw std::invalid_argument("gaussian-location-grid: grid too large");
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    std::vector<double> mean(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) mean[static_cast<std::size_t>(k)] = g[idx[static_cast<std::size_t>(k)]];
    cands.push_back(Measure::gaussian_nd(std::move(mean)));
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == g.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return Model(std::move(cands), std::move(meta));
}

Model translation_grid(TranslationBase base, double lo, double hi, double step, double scale, double alpha) {
  if (base == TranslationBase::kPower && !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("translation-grid: alpha must lie in (0, 1]");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("translation-grid: scale must be > 0");
  const auto g = grid(lo, hi, step);
  std::vector<Measure> cands;
  for (double t : g) cands.push_back(translated(base, t, scale, alpha));
  ModelMetadata meta;
  meta.family = "translation-grid(" + to_string(base) + ")";
  meta.vc_dimension = 2;
  meta.resolution = step;
  meta.parameters = g;
  return Model(std::move(cands), std::move(meta));
}

Model histogram_net(int cells, const std::vector<double>& values, double lo, double hi) {
  if (cells < 2) throw std::invalid_argument("histogram-net: need D >= 2");
  if (values.empty()) throw std::invalid_argument("histogram-net: empty value grid");
  std::vector<double> v = sorted_unique(values);
  if (v.front() < 0.0) throw std::invalid_argument("histogram-net: values must be >= 0");
  const ReferenceMeasure ref = ReferenceMeasure::uniform_partition(cells, lo, hi);
  const double target = static_cast<double>(cells);
  std::vector<Measure> cands;
  std::vector<double> cur;
  // Depth-first enumeration of value vectors summing to D.
  std::function<void(double)> rec = [&](double sum) {
    const auto left = static_cast<double>(cells - static_cast<int>(cur.size()));
    if (left == 0.0) {
      if (std::abs(sum - target) <= 1e-9) cands.push_back(Measure::on_reference(ref, cur));
      return;
    }
    for (double x : v) {
      const double rest = target - sum - x;
      if (rest < (left - 1.0) * v.front() - 1e-9 || rest > (left - 1.0) * v.back() + 1e-9) continue;
      cur.push_back(x);
      rec(sum + x);
      cur.pop_back();
      if (cands.size() > 1'000'000) throw std::invalid_argument("histogram-net: too many candidates");
    }
  };
  rec(0.0);
  if (cands.empty()) throw std::invalid_argument("histogram-net: no value vector averages to 1");
  ModelMetadata meta;
  meta.family = "histogram-net";
  meta.partition = ref;
  meta.resolution = v.size() > 1 ? v[1] - v[0] : 0.0;
  meta.vc_dimension = cells;
  return Model(std::move(cands), std::move(meta));
}

Model monotone_net(int max_pieces, const std::vector<double>& breakpoints, const std::vector<double>& levels,
                   std::size_t max_candidates) {
  if (max_pieces < 1) throw std::invalid_argument("monotone-net: max pieces must be >= 1");
  const auto b = sorted_unique(breakpoints);
  auto lv = sorted_unique(levels);
  if (b.size() < 2) throw std::invalid_argument("monotone-net: need at least two breakpoints");
  if (lv.empty() || lv.front() <= 0.0) throw std::invalid_argument("monotone-net: levels must be > 0");
  std::reverse(lv.begin(), lv.end());  // decreasing
  std::vector<Measure> cands;
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> edge_idx;
  std::vector<std::size_t> level_idx;

  auto emit = [&]() {
    const std::size_t k = level_idx.size();
    std::vector<double> edges(k + 1), lev(k);
    double total = 0.0;
    for (std::size_t i = 0; i <= k; ++i) edges[i] = b[edge_idx[i]];
    for (std::size_t i = 0; i < k; ++i) {
      lev[i] = lv[level_idx[i]];
      total += lev[i] * (edges[i + 1] - edges[i]);
    }
    for (double& x : lev) x /= total;
    std::vector<double> key = edges;
    for (double x : lev) key.push_back(std::round(x * 1e12) / 1e12);
    if (seen.insert(key).second) cands.push_back(Measure::piecewise_constant(edges, lev));
  };
  // Levels strictly decreasing, edges strictly increasing; k pieces.
  std::function<void(int)> levels_rec;
  std::function<void(int)> edges_rec = [&](int k) {
    if (cands.size() >= max_candidates) return;
    if (static_cast<int>(edge_idx.size()) == k + 1) {
      levels_rec(k);
      return;
    }
    const std::size_t start = edge_idx.empty() ? 0 : edge_idx.back() + 1;
    for (std::size_t i = start; i < b.size() && cands.size() < max_candidates; ++i) {
      edge_idx.push_back(i);
      edges_rec(k);
      edge_idx.pop_back();
    }
  };
  levels_rec = [&](int k) {
    if (cands.size() >= max_candidates) return;
    if (static_cast<int>(level_idx.size()) == k) {
      emit();
      return;
    }
    const std::size_t start = level_idx.empty() ? 0 : level_idx.back() + 1;
    for (std::size_t i = start; i < lv.size() && cands.size() < max_candidates; ++i) {
      level_idx.push_back(i);
      levels_rec(k);
      level_idx.pop_back();
    }
  };
  for (int k = 1; k <= max_pieces && cands.size() < max_candidates; ++k) edges_rec(k);
  ModelMetadata meta;
  meta.family = "monotone-net";
  meta.vc_dimension = 2.0 * max_pieces;
  meta.resolution = b[1] - b[0];
  return Model(std::move(cands), std::move(meta));
}

namespace {

std::vector<std::vector<double>> basis_functions(const L2Basis& basis) {
  if (basis.cells < 2) throw std::invalid_argument("l2-linear: need D >= 2 cells");
  if (!basis.functions.empty()) {
    for (const auto& f : basis.functions) {
      if (static_cast<int>(f.size()) != basis.cells) {
        throw std::invalid_argument("l2-linear: basis functions need one value per cell");
      }
    }
    return basis.functions;
  }
  const double root = std::sqrt(static_cast<double>(basis.cells));
  std::vector<std::vector<double>> out(static_cast<std::size_t>(basis.cells),
                                       std::vector<double>(static_cast<std::size_t>(basis.cells), 0.0));
  for (std::size_t k = 0; k < out.size(); ++k) out[k][k] = root;
  return out;
}

}  // namespace

double GramData::inner(const std::vector<double>& a, const std::vector<double>& b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) s += a[i] * gram[i][k] * b[k];
  }
  return s;
}

double GramData::distance(const std::vector<double>& a, const std::vector<double>& b) const {
  if (a.size() != b.size() || a.size() != gram.size()) throw std::invalid_argument("GramData: size mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return std::sqrt(std::max(0.0, inner(d, d)));
}

GramData l2_inner_products(const L2Basis& basis) {
  const auto phi = basis_functions(basis);
  const std::size_t k = phi.size();
  const double w = 1.0 / basis.cells;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t cell = 0; cell < static_cast<std::size_t>(basis.cells); ++cell) {
        s += phi[a][cell] * phi[c][cell] * w;
      }
      if (!std::isfinite(s)) throw std::invalid_argument("l2-linear: non-finite Gram entry");
      g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = s;
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 1e-14) {
    throw std::invalid_argument("l2-linear: basis functions are linearly dependent");
  }
  GramData out;
  out.gram.assign(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = 0; c < k; ++c) out.gram[a][c] = g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
  }
  double r2 = 0.0;
  for (std::size_t cell = 0; cell < static_cast<std::size_t>(basis.cells); ++cell) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < k; ++a) v(static_cast<Eigen::Index>(a)) = phi[a][cell];
    r2 = std::max(r2, v.dot(ldlt.solve(v)));
  }
  out.ratio_r = std::sqrt(r2);
  return out;
}

Model l2_linear(const L2Basis& basis, const std::vector<std::vector<double>>& coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("l2-linear: empty coefficient net");
  const auto phi = basis_functions(basis);
  const GramData gd = l2_inner_products(basis);
  const ReferenceMeasure ref = ReferenceMeasure::uniform_partition(basis.cells, basis.lo, basis.hi);
  std::vector<Measure> cands;
  for (const auto& c : coefficients) {
    if (c.size() != phi.size()) throw std::invalid_argument("l2-linear: one coefficient per basis function");
    std::vector<double> dens(static_cast<std::size_t>(basis.cells), 0.0);
    for (std::size_t a = 0; a < phi.size(); ++a) {
      for (std::size_t cell = 0; cell < dens.size(); ++cell) dens[cell] += c[a] * phi[a][cell];
    }
    cands.push_back(Measure::on_reference(ref, std::move(dens), true));
  }
  ModelMetadata meta;
  meta.family = "l2-linear";
  meta.partition = ref;
  meta.ratio_r = gd.ratio_r;
  return Model(std::move(cands), std::move(meta));
}

Model discrete_model(const std::vector<double>& points, const std::vector<std::vector<double>>& masses,
                     std::vector<double> weights) {
  if (masses.empty()) throw std::invalid_argument("discrete model: no candidates");
  const ReferenceMeasure ref =
      weights.empty() ? ReferenceMeasure::counting(points) : ReferenceMeasure::discrete(points, std::move(weights));
  std::vector<Measure> cands;
  for (const auto& m : masses) {
    if (m.size() != points.size()) throw std::invalid_argument("discrete model: one mass per point expected");
    cands.push_back(Measure::from_masses(ref, m));
  }
  ModelMetadata meta;
  meta.family = "discrete";
  meta.partition = ref;
  return Model(std::move(cands), std::move(meta));
}

Model regression_tuples(const std::vector<std::vector<double>>& thetas, TranslationBase base, double scale,
                        double alpha) {
  std::vector<std::vector<Measure>> tuples;
  std::map<double, Measure> cache;
  for (const auto& th : thetas) {
    std::vector<Measure> t;
    t.reserve(th.size());
    for (double x : th) {
      auto it = cache.find(x);
      if (it == cache.end()) it = cache.emplace(x, translated(base, x, scale, alpha)).first;
      t.push_back(it->second);
    }
    tuples.push_back(std::move(t));
  }
  ModelMetadata meta;
  meta.family = "regression-tuples(" + to_string(base) + ")";
  return Model::from_tuples(std::move(tuples), std::move(meta));
}

std::string to_string(ModelBuilderConfig::Family f) {
  using F = ModelBuilderConfig::Family;
  switch (f) {
    case F::kGaussianLocationGrid: return "gaussian-location-grid";
    case F::kTranslationGrid: return "translation-grid";
    case F::kHistogramNet: return "histogram-net";
    case F::kMonotoneNet: return "monotone-net";
    case F::kL2Linear: return "l2-linear";
    case F::kDiscrete: return "discrete";
    case F::kRegressionTuples: return "regression-tuples";
  }
  return "gaussian-location-grid";
}

ModelBuilderConfig::Family model_family_from_string(const std::string& s) {
  using F = ModelBuilderConfig::Family;
  for (F f : {F::kGaussianLocationGrid, F::kTranslationGrid, F::kHistogramNet, F::kMonotoneNet, F::kL2Linear,
              F::kDiscrete, F::kRegressionTuples}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown model family '" + s + "'");
}

ModelBuilderConfig ModelBuilderConfig::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be > 0");
  ModelBuilderConfig c = *this;
  if (family == Family::kGaussianLocationGrid || family == Family::kTranslationGrid) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo) * factor;
    c.lo = mid - half;
    c.hi = mid + half;
    c.step = step * factor;
  }
  return c;
}

Model build(const ModelBuilderConfig& c) {
  using F = ModelBuilderConfig::Family;
  switch (c.family) {
    case F::kGaussianLocationGrid: return gaussian_location_grid(c.dimension, c.lo, c.hi, c.step);
    case F::kTranslationGrid: return translation_grid(c.base, c.lo, c.hi, c.step, c.scale, c.alpha);
    case F::kHistogramNet: return histogram_net(c.cells, c.values, c.lo, c.hi);
    case F::kMonotoneNet: return monotone_net(c.max_pieces, c.breakpoints, c.values, c.max_candidates);
    case F::kL2Linear: return l2_linear(c.basis, c.coefficients);
    case F::kDiscrete: return discrete_model(c.points, c.coefficients, c.weights);
    case F::kRegressionTuples: return regression_tuples(c.coefficients, c.base, c.scale, c.alpha);
  }
  throw std::logic_error("build: unknown family");
}

}  // namespace ellest
