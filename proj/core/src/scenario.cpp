#include "ellest/scenario.hpp"

#include "json_reader.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace ellest {

using nlohmann::json;

using detail::at_path;
using detail::fail;
using detail::Obj;

namespace {

const std::map<std::string, MeasureSpec::Type>& measure_types() {
  using T = MeasureSpec::Type;
  static const std::map<std::string, T> m = {{"gaussian", T::kGaussian},
                                             {"gaussian-nd", T::kGaussianNd},
                                             {"cauchy", T::kCauchy},
                                             {"uniform", T::kUniform},
                                             {"uniform-translation", T::kUniformTranslation},
                                             {"power", T::kPower},
                                             {"point-mass", T::kPointMass},
                                             {"piecewise-constant", T::kPiecewiseConstant},
                                             {"discrete", T::kDiscrete},
                                             {"histogram", T::kHistogram},
                                             {"mixture", T::kMixture}};
  return m;
}

std::string type_name(MeasureSpec::Type t) {
  for (const auto& [k, v] : measure_types()) {
    if (v == t) return k;
  }
  return "gaussian";
}

}  // namespace

Measure MeasureSpec::build() const {
  using T = Type;
  switch (type) {
    case T::kGaussian: return Measure::gaussian(location, scale);
    case T::kGaussianNd: return Measure::gaussian_nd(mean);
    case T::kCauchy: return Measure::cauchy(location, scale);
    case T::kUniform: return Measure::uniform(lo, hi);
    case T::kUniformTranslation: return Measure::uniform_translation(location, scale);
    case T::kPower: return Measure::power_translation(alpha, location);
    case T::kPointMass: return Measure::point_mass(location);
    case T::kPiecewiseConstant: return Measure::piecewise_constant(edges, levels);
    case T::kDiscrete: {
      const ReferenceMeasure ref =
          weights.empty() ? ReferenceMeasure::counting(points) : ReferenceMeasure::discrete(points, weights);
      return Measure::from_masses(ref, masses);
    }
    case T::kHistogram:
      return Measure::on_reference(ReferenceMeasure::uniform_partition(static_cast<int>(levels.size()), lo, hi),
                                   levels);
    case T::kMixture: {
      if (weights.size() != components.size()) throw std::invalid_argument("mixture: one weight per component");
      std::vector<std::pair<double, Measure>> parts;
      for (std::size_t i = 0; i < components.size(); ++i) parts.emplace_back(weights[i], components[i].build());
      return Measure::mixture(parts);
    }
  }
  throw std::invalid_argument("unknown measure type");
}

MeasureSpec default_contaminant(const MeasureSpec& base) {
  using T = MeasureSpec::Type;
  if (base.type == T::kDiscrete || base.type == T::kHistogram || base.type == T::kGaussianNd) {
    throw std::invalid_argument("a contaminant must be given for finite or multivariate truths");
  }
  const auto [lo, hi] = base.build().effective_range();
  MeasureSpec c;
  c.type = T::kPointMass;
  c.location = hi + 10.0 * std::max(1.0, hi - lo);
  return c;
}

std::vector<Measure> true_marginals(const TruthSpec& truth, std::size_t n) {
  using K = TruthSpec::Kind;
  if (truth.kind == K::kIid) return std::vector<Measure>(n, truth.base.build());
  if (truth.kind == K::kTuples) {
    if (truth.marginals.size() != n) throw std::invalid_argument("tuples truth: one marginal per observation expected");
    std::vector<Measure> out;
    for (const auto& m : truth.marginals) out.push_back(m.build());
    return out;
  }
  if (truth.alphas.size() != 1 && truth.alphas.size() != n) {
    throw std::invalid_argument("contaminated truth: alphas must have length 1 or n");
  }
  const Measure base = truth.base.build();
  const Measure cont = (truth.contaminant ? *truth.contaminant : default_contaminant(truth.base)).build();
  std::map<double, Measure> cache;
  std::vector<Measure> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = truth.alphas.size() == 1 ? truth.alphas[0] : truth.alphas[i];
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("contaminated truth: alphas must lie in [0, 1]");
    auto it = cache.find(a);
    if (it == cache.end()) {
      Measure m = a == 0.0 ? base : a == 1.0 ? cont : Measure::mixture({{1.0 - a, base}, {a, cont}});
      it = cache.emplace(a, m).first;
    }
    out.push_back(it->second);
  }
  return out;
}

json to_json(const MeasureSpec& m) {
  using T = MeasureSpec::Type;
  json j;
  j["type"] = type_name(m.type);
  switch (m.type) {
    case T::kGaussian:
    case T::kCauchy:
    case T::kUniformTranslation:
      j["location"] = m.location;
      j["scale"] = m.scale;
      break;
    case T::kGaussianNd: j["mean"] = m.mean; break;
    case T::kUniform:
      j["lo"] = m.lo;
      j["hi"] = m.hi;
      break;
    case T::kPower:
      j["location"] = m.location;
      j["alpha"] = m.alpha;
      break;
    case T::kPointMass: j["location"] = m.location; break;
    case T::kPiecewiseConstant:
      j["edges"] = m.edges;
      j["levels"] = m.levels;
      break;
    case T::kDiscrete:
      j["points"] = m.points;
      j["masses"] = m.masses;
      if (!m.weights.empty()) j["weights"] = m.weights;
      break;
    case T::kHistogram:
      j["lo"] = m.lo;
      j["hi"] = m.hi;
      j["levels"] = m.levels;
      break;
    case T::kMixture: {
      j["weights"] = m.weights;
      json parts = json::array();
      for (const auto& c : m.components) parts.push_back(to_json(c));
      j["components"] = parts;
      break;
    }
  }
  return j;
}

MeasureSpec measure_spec_from_json(const json& j, const std::string& path) {
  using T = MeasureSpec::Type;
  Obj o(j, path);
  MeasureSpec m;
  const std::string type = o.str("type");
  const auto it = measure_types().find(type);
  if (it == measure_types().end()) fail(o.at("type"), "unknown measure type '" + type + "'");
  m.type = it->second;
  switch (m.type) {
    case T::kGaussian:
    case T::kCauchy:
    case T::kUniformTranslation:
      m.location = o.num("location", 0.0);
      m.scale = o.num("scale", 1.0);
      if (!(m.scale > 0.0)) fail(o.at("scale"), "must be > 0");
      break;
    case T::kGaussianNd:
      m.mean = o.nums("mean");
      if (m.mean.empty()) fail(o.at("mean"), "must be nonempty");
      break;
    case T::kUniform:
      m.lo = o.num("lo");
      m.hi = o.num("hi");
      if (!(m.hi > m.lo)) fail(o.at("hi"), "must exceed lo");
      break;
    case T::kPower:
      m.location = o.num("location", 0.0);
      m.alpha = o.num("alpha");
      if (!(m.alpha > 0.0 && m.alpha <= 1.0)) fail(o.at("alpha"), "must lie in (0, 1]");
      break;
    case T::kPointMass: m.location = o.num("location"); break;
    case T::kPiecewiseConstant:
      m.edges = o.nums("edges");
      m.levels = o.nums("levels");
      break;
    case T::kDiscrete:
      m.points = o.nums("points");
      m.masses = o.nums("masses");
      m.weights = o.nums("weights", std::vector<double>{});
      break;
    case T::kHistogram:
      m.lo = o.num("lo", 0.0);
      m.hi = o.num("hi", 1.0);
      m.levels = o.nums("levels");
      break;
    case T::kMixture: {
      m.weights = o.nums("weights");
      const json& parts = o.need("components");
      if (!parts.is_array()) fail(o.at("components"), "expected an array");
      for (std::size_t i = 0; i < parts.size(); ++i) {
        m.components.push_back(measure_spec_from_json(parts[i], o.at("components") + "[" + std::to_string(i) + "]"));
      }
      break;
    }
  }
  o.done();
  at_path(path, [&] { return m.build(); });
  return m;
}

json to_json(const TruthSpec& t) {
  json j;
  switch (t.kind) {
    case TruthSpec::Kind::kIid:
      j["kind"] = "iid";
      j["measure"] = to_json(t.base);
      break;
    case TruthSpec::Kind::kContaminated:
      j["kind"] = "contaminated";
      j["base"] = to_json(t.base);
      j["alphas"] = t.alphas;
      j["contaminant"] = to_json(t.contaminant ? *t.contaminant : default_contaminant(t.base));
      break;
    case TruthSpec::Kind::kTuples: {
      j["kind"] = "tuples";
      json arr = json::array();
      for (const auto& m : t.marginals) arr.push_back(to_json(m));
      j["marginals"] = arr;
      break;
    }
  }
  return j;
}

TruthSpec truth_spec_from_json(const json& j, const std::string& path) {
  Obj o(j, path);
  TruthSpec t;
  const std::string kind = o.str("kind", "iid");
  if (kind == "iid") {
    t.kind = TruthSpec::Kind::kIid;
    t.base = measure_spec_from_json(o.need("measure"), o.at("measure"));
  } else if (kind == "contaminated") {
    t.kind = TruthSpec::Kind::kContaminated;
    t.base = measure_spec_from_json(o.need("base"), o.at("base"));
    t.alphas = o.nums("alphas");
    if (t.alphas.empty()) fail(o.at("alphas"), "must be nonempty");
    for (double a : t.alphas) {
      if (!(a >= 0.0 && a <= 1.0)) fail(o.at("alphas"), "values must lie in [0, 1]");
    }
    if (const json* c = o.find("contaminant")) {
      t.contaminant = measure_spec_from_json(*c, o.at("contaminant"));
    } else {
      t.contaminant = at_path(o.at("contaminant"), [&] { return default_contaminant(t.base); });
    }
  } else if (kind == "tuples") {
    t.kind = TruthSpec::Kind::kTuples;
    const json& arr = o.need("marginals");
    if (!arr.is_array() || arr.empty()) fail(o.at("marginals"), "expected a nonempty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      t.marginals.push_back(measure_spec_from_json(arr[i], o.at("marginals") + "[" + std::to_string(i) + "]"));
    }
  } else {
    fail(o.at("kind"), "expected iid, contaminated or tuples");
  }
  o.done();
  return t;
}

json to_json(const ModelBuilderConfig& c) {
  using F = ModelBuilderConfig::Family;
  json j;
  j["family"] = to_string(c.family);
  switch (c.family) {
    case F::kGaussianLocationGrid:
      j["dimension"] = c.dimension;
      j["lo"] = c.lo;
      j["hi"] = c.hi;
      j["step"] = c.step;
      break;
    case F::kTranslationGrid:
      j["base"] = to_string(c.base);
      j["lo"] = c.lo;
      j["hi"] = c.hi;
      j["step"] = c.step;
      j["scale"] = c.scale;
      if (c.base == TranslationBase::kPower) j["alpha"] = c.alpha;
      break;
    case F::kHistogramNet:
      j["cells"] = c.cells;
      j["values"] = c.values;
      j["lo"] = c.lo;
      j["hi"] = c.hi;
      break;
    case F::kMonotoneNet:
      j["max_pieces"] = c.max_pieces;
      j["breakpoints"] = c.breakpoints;
      j["levels"] = c.values;
      j["max_candidates"] = c.max_candidates;
      break;
    case F::kL2Linear:
      j["cells"] = c.basis.cells;
      j["lo"] = c.basis.lo;
      j["hi"] = c.basis.hi;
      if (!c.basis.functions.empty()) j["functions"] = c.basis.functions;
      j["coefficients"] = c.coefficients;
      break;
    case F::kDiscrete:
      j["points"] = c.points;
      j["masses"] = c.coefficients;
      if (!c.weights.empty()) j["weights"] = c.weights;
      break;
    case F::kRegressionTuples:
      j["base"] = to_string(c.base);
      j["thetas"] = c.coefficients;
      j["scale"] = c.scale;
      if (c.base == TranslationBase::kPower) j["alpha"] = c.alpha;
      break;
  }
  return j;
}

ModelBuilderConfig model_config_from_json(const json& j, const std::string& path) {
  using F = ModelBuilderConfig::Family;
  Obj o(j, path);
  ModelBuilderConfig c;
  c.family = at_path(o.at("family"), [&] { return model_family_from_string(o.str("family")); });
  auto base = [&] { return at_path(o.at("base"), [&] { return translation_base_from_string(o.str("base")); }); };
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0)) fail(o.at(key), "must be > 0");
  };
  switch (c.family) {
    case F::kGaussianLocationGrid:
      c.dimension = static_cast<int>(o.count("dimension", 1, 1));
      c.lo = o.num("lo");
      c.hi = o.num("hi");
      c.step = o.num("step");
      positive("step", c.step);
      break;
    case F::kTranslationGrid:
      c.base = base();
      c.lo = o.num("lo");
      c.hi = o.num("hi");
      c.step = o.num("step");
      positive("step", c.step);
      c.scale = o.num("scale", 1.0);
      positive("scale", c.scale);
      if (c.base == TranslationBase::kPower) c.alpha = o.num("alpha", 0.5);
      break;
    case F::kHistogramNet:
      c.cells = static_cast<int>(o.count("cells", std::nullopt, 1));
      c.values = o.nums("values");
      c.lo = o.num("lo", 0.0);
      c.hi = o.num("hi", 1.0);
      break;
    case F::kMonotoneNet:
      c.max_pieces = static_cast<int>(o.count("max_pieces", std::nullopt, 1));
      c.breakpoints = o.nums("breakpoints");
      c.values = o.nums("levels");
      c.max_candidates = o.count("max_candidates", 5000, 1);
      break;
    case F::kL2Linear:
      c.basis.cells = static_cast<int>(o.count("cells", std::nullopt, 1));
      c.basis.lo = o.num("lo", 0.0);
      c.basis.hi = o.num("hi", 1.0);
      c.basis.functions = o.matrix("functions", std::vector<std::vector<double>>{});
      c.coefficients = o.matrix("coefficients");
      break;
    case F::kDiscrete:
      c.points = o.nums("points");
      c.coefficients = o.matrix("masses");
      c.weights = o.nums("weights", std::vector<double>{});
      break;
    case F::kRegressionTuples:
      c.base = base();
      c.coefficients = o.matrix("thetas");
      c.scale = o.num("scale", 1.0);
      positive("scale", c.scale);
      if (c.base == TranslationBase::kPower) c.alpha = o.num("alpha", 0.5);
      break;
  }
  o.done();
  at_path(path, [&] { return build(c); });
  return c;
}

json to_json(const LossSpec& l) {
  json j;
  j["kind"] = to_string(l.kind);
  switch (l.kind) {
    case LossKind::kKl: j["a"] = l.kl_a; break;
    case LossKind::kLj:
      j["j"] = l.j;
      j["ratio_r"] = l.ratio_r;
      break;
    case LossKind::kLinf: j["cells"] = l.cells; break;
    default: break;
  }
  return j;
}

LossSpec loss_spec_from_json(const json& j, const std::string& path) {
  Obj o(j, path);
  LossSpec l;
  l.kind = at_path(o.at("kind"), [&] { return loss_kind_from_string(o.str("kind")); });
  switch (l.kind) {
    case LossKind::kKl:
      l.kl_a = o.num("a", 0.0);
      if (l.kl_a < 0.0) fail(o.at("a"), "must be >= 0 (0 takes it from the model)");
      break;
    case LossKind::kLj:
      l.j = o.num("j", 2.0);
      if (!(l.j > 1.0)) fail(o.at("j"), "must be > 1");
      l.ratio_r = o.num("ratio_r", 0.0);
      if (l.ratio_r < 0.0) fail(o.at("ratio_r"), "must be >= 0 (0 takes it from the model)");
      break;
    case LossKind::kLinf:
      l.cells = static_cast<int>(o.count("cells", 0));
      break;
    default: break;
  }
  o.done();
  return l;
}

json to_json(const Scenario& s) {
  json j;
  j["truth"] = to_json(s.truth);
  j["model"] = to_json(s.model);
  j["loss"] = to_json(s.loss);
  j["n"] = s.n;
  j["epsilon"] = s.epsilon;
  j["replications"] = s.replications;
  j["include_empirical"] = s.include_empirical;
  return j;
}

Scenario scenario_from_json(const json& j, const std::string& path) {
  Obj o(j, path);
  Scenario s;
  s.truth = truth_spec_from_json(o.need("truth"), o.at("truth"));
  s.model = model_config_from_json(o.need("model"), o.at("model"));
  s.loss = loss_spec_from_json(o.need("loss"), o.at("loss"));
  s.n = o.count("n", std::nullopt, 1);
  s.epsilon = o.num("epsilon", 1.0);
  if (!(s.epsilon > 0.0)) fail(o.at("epsilon"), "must be > 0");
  s.replications = o.count("replications", 1, 1);
  s.include_empirical = o.boolean("include_empirical", false);
  if (s.include_empirical && s.loss.kind != LossKind::kWasserstein) {
    fail(o.at("include_empirical"), "only meaningful with the wasserstein loss");
  }
  if (const json* seed = o.find("seed")) {
    if (!seed->is_number_unsigned()) fail(o.at("seed"), "expected a nonnegative integer");
    s.seed = seed->get<std::uint64_t>();
  }
  if (s.truth.kind == TruthSpec::Kind::kTuples && s.truth.marginals.size() != s.n) {
    fail(o.at("truth") + ".marginals", "length must equal n");
  }
  if (s.truth.kind == TruthSpec::Kind::kContaminated && s.truth.alphas.size() != 1 && s.truth.alphas.size() != s.n) {
    fail(o.at("truth") + ".alphas", "length must be 1 or n");
  }
  o.done();
  return s;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string scenario_digest(const Scenario& s) { return fnv1a_hex(to_json(s).dump()); }

}  // namespace ellest
