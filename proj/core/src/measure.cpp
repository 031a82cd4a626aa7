#include "ellest/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ellest/numeric.hpp"

namespace ellest {

std::string family_name(FamilyTag::Kind kind) {
  switch (kind) {
    case FamilyTag::Kind::kNone: return "none";
    case FamilyTag::Kind::kGaussian: return "gaussian-location";
    case FamilyTag::Kind::kCauchy: return "cauchy-location";
    case FamilyTag::Kind::kUniformTranslation: return "uniform-translation";
    case FamilyTag::Kind::kPowerTranslation: return "power-translation";
  }
  return "none";
}

// ---------------------------------------------------------------------------
// Component

double Component::pdf(double x) const {
  switch (kind) {
    case Kind::kGaussian: {
      const double z = (x - a) / b;
      return std::exp(-0.5 * z * z) / (b * std::sqrt(2.0 * std::numbers::pi));
    }
    case Kind::kCauchy: {
      const double z = (x - a) / b;
      return 1.0 / (std::numbers::pi * b * (1.0 + z * z));
    }
    case Kind::kUniform: return (x >= a && x < b) ? 1.0 / (b - a) : 0.0;
    case Kind::kPower: {
      const double y = x - a;
      return (y > 0.0 && y <= 1.0) ? b * std::pow(y, b - 1.0) : 0.0;
    }
    case Kind::kPiecewiseConstant: {
      if (!(x >= edges.front() && x < edges.back())) return 0.0;
      auto it = std::upper_bound(edges.begin(), edges.end(), x);
      return levels[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
    case Kind::kCustom: return custom->pdf(x);
  }
  return 0.0;
}

double Component::cdf(double x) const {
  switch (kind) {
    case Kind::kGaussian: return normal_cdf((x - a) / b);
    case Kind::kCauchy: return 0.5 + std::atan((x - a) / b) / std::numbers::pi;
    case Kind::kUniform:
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
    case Kind::kPower: {
      const double y = x - a;
      if (y <= 0.0) return 0.0;
      if (y >= 1.0) return 1.0;
      return std::pow(y, b);
    }
    case Kind::kPiecewiseConstant: {
      if (x <= edges.front()) return 0.0;
      if (x >= edges.back()) return cum.back();
      auto it = std::upper_bound(edges.begin(), edges.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
      return cum[i] + levels[i] * (x - edges[i]);
    }
    case Kind::kCustom:
      if (!custom->cdf) throw std::logic_error("custom law without cdf");
      return custom->cdf(x);
  }
  return 0.0;
}

double Component::quantile(double u) const {
  switch (kind) {
    case Kind::kGaussian: return a + b * normal_quantile(u);
    case Kind::kCauchy: return a + b * std::tan(std::numbers::pi * (u - 0.5));
    case Kind::kUniform: return a + (b - a) * u;
    case Kind::kPower: return a + std::pow(u, 1.0 / b);
    case Kind::kPiecewiseConstant: {
      const double target = u * cum.back();
      auto it = std::upper_bound(cum.begin(), cum.end(), target);
      std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cum.begin() - 1, 0));
      while (i + 1 < levels.size() && levels[i] == 0.0) ++i;
      i = std::min(i, levels.size() - 1);
      if (levels[i] <= 0.0) return edges[i];
      return std::min(edges[i] + (target - cum[i]) / levels[i], std::nextafter(edges[i + 1], edges[i]));
    }
    case Kind::kCustom: {
      if (custom->quantile) return custom->quantile(u);
      if (!custom->cdf) throw std::logic_error("custom law has no cdf or quantile");
      double lo = custom->lo, hi = custom->hi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (custom->cdf(mid) < u) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

bool Component::has_cdf() const { return kind != Kind::kCustom || static_cast<bool>(custom->cdf); }

bool Component::cdf_is_piecewise_linear() const {
  return kind == Kind::kUniform || kind == Kind::kPiecewiseConstant ||
         (kind == Kind::kPower && b == 1.0);
}

std::vector<double> Component::breakpoints() const {
  switch (kind) {
    case Kind::kGaussian:
    case Kind::kCauchy: return {a};
    case Kind::kUniform: return {a, b};
    case Kind::kPower: return {a, a + 1.0};
    case Kind::kPiecewiseConstant: return edges;
    case Kind::kCustom: return custom->breakpoints;
  }
  return {};
}

std::vector<std::pair<double, int>> Component::singular_points() const {
  if (kind == Kind::kPower && b < 1.0) {
    return {{a, std::min(40, static_cast<int>(std::ceil(2.0 / b)))}};
  }
  return {};
}

std::pair<double, double> Component::support() const {
  switch (kind) {
    case Kind::kGaussian:
    case Kind::kCauchy: return {-kInf, kInf};
    case Kind::kUniform: return {a, b};
    case Kind::kPower: return {a, a + 1.0};
    case Kind::kPiecewiseConstant: {
      std::size_t first = 0, last = levels.size();
      while (first < levels.size() && levels[first] == 0.0) ++first;
      while (last > first && levels[last - 1] == 0.0) --last;
      if (first >= last) return {edges.front(), edges.front()};
      return {edges[first], edges[last]};
    }
    case Kind::kCustom: return {custom->lo, custom->hi};
  }
  return {-kInf, kInf};
}

std::pair<double, double> Component::effective_range() const {
  switch (kind) {
    case Kind::kGaussian: return {a - 40.0 * b, a + 40.0 * b};
    case Kind::kCauchy: return {quantile(1e-12), quantile(1.0 - 1e-12)};
    default: return support();
  }
}

// ---------------------------------------------------------------------------
// Measure

struct Measure::Impl {
  Layout layout = Layout::kLine;
  ReferenceMeasure ref;
  std::string tag;
  FamilyTag family;
  bool is_signed = false;
  std::vector<double> cells;                        // finite
  std::vector<std::pair<double, Component>> comps;  // line
  std::vector<Atom> atoms;                          // line, sorted by x
  std::vector<double> mean;                         // nd
  std::shared_ptr<const Impl> line_view;            // finite probability measures
};

namespace {

using Impl = Measure::Impl;

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_finite_param(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

std::shared_ptr<Impl> single_component(Component c, std::string tag, FamilyTag family) {
  auto impl = std::make_shared<Impl>();
  impl->layout = Measure::Layout::kLine;
  impl->ref = ReferenceMeasure::lebesgue();
  impl->tag = std::move(tag);
  impl->family = family;
  impl->comps.emplace_back(1.0, std::move(c));
  return impl;
}

void merge_atoms(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (a.mass == 0.0) continue;
    if (!out.empty() && out.back().x == a.x) {
      out.back().mass += a.mass;
    } else {
      out.push_back(a);
    }
  }
  atoms = std::move(out);
}

std::shared_ptr<const Impl> build_line_view(const Impl& finite) {
  auto line = std::make_shared<Impl>();
  line->layout = Measure::Layout::kLine;
  line->ref = ReferenceMeasure::lebesgue();
  line->tag = finite.tag;
  const ReferenceMeasure& ref = finite.ref;
  if (ref.kind() == ReferenceMeasure::Kind::kDiscrete) {
    for (int k = 0; k < ref.cells(); ++k) {
      const double m = finite.cells[static_cast<std::size_t>(k)] * ref.weight(k);
      if (m != 0.0) line->atoms.push_back({ref.points()[static_cast<std::size_t>(k)], m});
    }
    merge_atoms(line->atoms);
  } else {
    Component c;
    c.kind = Component::Kind::kPiecewiseConstant;
    c.edges = ref.edges();
    const double width = ref.hi() - ref.lo();
    c.cum.push_back(0.0);
    for (std::size_t i = 0; i < finite.cells.size(); ++i) {
      c.levels.push_back(finite.cells[i] / width);
      c.cum.push_back(c.cum.back() + c.levels.back() * (c.edges[i + 1] - c.edges[i]));
    }
    line->comps.emplace_back(1.0, std::move(c));
  }
  return line;
}

double line_total_mass(const Impl& impl) {
  double total = 0.0;
  for (const auto& [w, c] : impl.comps) {
    total += c.kind == Component::Kind::kPiecewiseConstant ? w * c.cum.back() : w;
  }
  for (const Atom& a : impl.atoms) total += a.mass;
  return total;
}

}  // namespace

Measure Measure::gaussian(double mean, double sd) {
  check_finite_param(mean, "gaussian mean");
  if (!(sd > 0.0 && std::isfinite(sd))) throw std::invalid_argument("gaussian sd must be > 0");
  Component c{Component::Kind::kGaussian, mean, sd, {}, {}, {}, nullptr};
  std::string tag = "N(" + fmt_num(mean) + "," + fmt_num(sd * sd) + ")";
  return Measure(single_component(std::move(c), tag,
                                  {FamilyTag::Kind::kGaussian, mean, sd, 1.0}));
}

Measure Measure::gaussian_nd(std::vector<double> mean) {
  if (mean.empty()) throw std::invalid_argument("gaussian_nd: empty mean");
  for (double m : mean) check_finite_param(m, "gaussian_nd mean");
  if (mean.size() == 1) return gaussian(mean[0]);
  auto impl = std::make_shared<Impl>();
  impl->layout = Layout::kGaussianNd;
  impl->ref = ReferenceMeasure::lebesgue_nd(static_cast<int>(mean.size()));
  std::string tag = "N((";
  for (std::size_t i = 0; i < mean.size(); ++i) tag += (i ? "," : "") + fmt_num(mean[i]);
  impl->tag = tag + "),I)";
  impl->family = {FamilyTag::Kind::kGaussian, 0.0, 1.0, 1.0};
  impl->mean = std::move(mean);
  return Measure(impl);
}

Measure Measure::cauchy(double location, double scale) {
  check_finite_param(location, "cauchy location");
  if (!(scale > 0.0 && std::isfinite(scale))) throw std::invalid_argument("cauchy scale must be > 0");
  Component c{Component::Kind::kCauchy, location, scale, {}, {}, {}, nullptr};
  return Measure(single_component(std::move(c),
                                  "Cauchy(" + fmt_num(location) + "," + fmt_num(scale) + ")",
                                  {FamilyTag::Kind::kCauchy, location, scale, 1.0}));
}

Measure Measure::uniform(double lo, double hi) {
  check_finite_param(lo, "uniform lo");
  check_finite_param(hi, "uniform hi");
  if (!(lo < hi)) throw std::invalid_argument("uniform: need lo < hi");
  Component c{Component::Kind::kUniform, lo, hi, {}, {}, {}, nullptr};
  return Measure(single_component(
      std::move(c), "U[" + fmt_num(lo) + "," + fmt_num(hi) + ")",
      {FamilyTag::Kind::kUniformTranslation, 0.5 * (lo + hi), hi - lo, 1.0}));
}

Measure Measure::uniform_translation(double theta, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("uniform_translation: width must be > 0");
  Measure m = uniform(theta - 0.5 * width, theta + 0.5 * width);
  auto impl = std::make_shared<Impl>(*m.impl_);
  impl->family.location = theta;
  impl->family.scale = width;
  return Measure(impl);
}

Measure Measure::power_translation(double alpha, double theta) {
  check_finite_param(theta, "power theta");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("power_translation: alpha must lie in (0,1]");
  Component c{Component::Kind::kPower, theta, alpha, {}, {}, {}, nullptr};
  return Measure(single_component(
      std::move(c), "Power(" + fmt_num(alpha) + ";" + fmt_num(theta) + ")",
      {FamilyTag::Kind::kPowerTranslation, theta, 1.0, alpha}));
}

Measure Measure::piecewise_constant(std::vector<double> edges, std::vector<double> levels) {
  if (edges.size() < 2 || levels.size() + 1 != edges.size()) {
    throw std::invalid_argument("piecewise_constant: need K+1 edges for K levels");
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1]) || !std::isfinite(edges[i]) || !std::isfinite(edges[i + 1])) {
      throw std::invalid_argument("piecewise_constant: edges must be finite and increasing");
    }
  }
  for (double l : levels) {
    if (!(l >= 0.0 && std::isfinite(l))) throw std::invalid_argument("piecewise_constant: levels must be >= 0");
  }
  Component c;
  c.kind = Component::Kind::kPiecewiseConstant;
  c.edges = std::move(edges);
  c.levels = std::move(levels);
  c.cum.push_back(0.0);
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    c.cum.push_back(c.cum.back() + c.levels[i] * (c.edges[i + 1] - c.edges[i]));
  }
  std::string tag = "pc[" + std::to_string(c.levels.size()) + " pieces]";
  return Measure(single_component(std::move(c), tag, {}));
}

Measure Measure::custom(CustomLaw law) {
  if (!law.pdf) throw std::invalid_argument("custom law needs a pdf");
  Component c;
  c.kind = Component::Kind::kCustom;
  c.custom = std::make_shared<const CustomLaw>(std::move(law));
  return Measure(single_component(std::move(c), "custom", {}));
}

Measure Measure::point_mass(double at) {
  check_finite_param(at, "point mass location");
  return on_reference(ReferenceMeasure::counting({at}), {1.0}).with_tag("delta(" + fmt_num(at) + ")");
}

Measure Measure::on_reference(const ReferenceMeasure& ref, std::vector<double> densities,
                              bool allow_signed) {
  if (!ref.is_finite()) throw std::invalid_argument("on_reference: reference must be finite");
  if (static_cast<int>(densities.size()) != ref.cells()) {
    throw std::invalid_argument("on_reference: expected " + std::to_string(ref.cells()) +
                                " cell values, got " + std::to_string(densities.size()));
  }
  bool negative = false;
  for (double v : densities) {
    if (!std::isfinite(v)) throw std::invalid_argument("on_reference: non-finite density");
    negative = negative || v < 0.0;
  }
  if (negative && !allow_signed) {
    throw std::invalid_argument("on_reference: negative density for a probability measure");
  }
  auto impl = std::make_shared<Impl>();
  impl->layout = Layout::kFinite;
  impl->ref = ref;
  impl->cells = std::move(densities);
  impl->is_signed = allow_signed;
  impl->tag = ref.kind() == ReferenceMeasure::Kind::kDiscrete ? "discrete" : "histogram";
  if (!negative) impl->line_view = build_line_view(*impl);
  return Measure(impl);
}

Measure Measure::from_masses(const ReferenceMeasure& ref, const std::vector<double>& masses) {
  if (static_cast<int>(masses.size()) != ref.cells()) {
    throw std::invalid_argument("from_masses: length does not match the reference");
  }
  std::vector<double> dens(masses.size());
  for (std::size_t k = 0; k < masses.size(); ++k) dens[k] = masses[k] / ref.weight(static_cast<int>(k));
  return on_reference(ref, std::move(dens));
}

Measure Measure::mixture(const std::vector<std::pair<double, Measure>>& parts) {
  std::vector<std::pair<double, Measure>> kept;
  for (const auto& [w, m] : parts) {
    if (!(w >= 0.0 && std::isfinite(w))) throw std::invalid_argument("mixture: weights must be >= 0");
    if (m.is_signed()) throw std::invalid_argument("mixture: signed component");
    if (m.dimension() != 1) throw std::invalid_argument("mixture: only 1-d components are supported");
    if (w > 0.0) kept.emplace_back(w, m);
  }
  if (kept.empty()) throw std::invalid_argument("mixture: no component with positive weight");
  if (kept.size() == 1 && kept.front().first == 1.0) return kept.front().second;

  bool same_finite = kept.front().second.layout() == Layout::kFinite;
  for (const auto& [w, m] : kept) {
    same_finite = same_finite && m.layout() == Layout::kFinite &&
                  m.reference() == kept.front().second.reference();
  }
  std::string tag = "mix(";
  for (std::size_t i = 0; i < kept.size(); ++i) {
    tag += (i ? "+" : "") + fmt_num(kept[i].first) + "*" + kept[i].second.tag();
  }
  tag += ")";
  if (same_finite) {
    std::vector<double> dens(kept.front().second.cell_densities().size(), 0.0);
    for (const auto& [w, m] : kept) {
      for (std::size_t k = 0; k < dens.size(); ++k) dens[k] += w * m.cell_densities()[k];
    }
    return on_reference(kept.front().second.reference(), std::move(dens)).with_tag(tag);
  }
  auto impl = std::make_shared<Impl>();
  impl->layout = Layout::kLine;
  impl->ref = ReferenceMeasure::lebesgue();
  impl->tag = tag;
  for (const auto& [w, m] : kept) {
    Measure line = m.as_line();
    for (const auto& [cw, c] : line.impl_->comps) impl->comps.emplace_back(w * cw, c);
    for (const Atom& a : line.impl_->atoms) impl->atoms.push_back({a.x, w * a.mass});
  }
  merge_atoms(impl->atoms);
  return Measure(impl);
}

Measure::Layout Measure::layout() const { return impl_->layout; }
const ReferenceMeasure& Measure::reference() const { return impl_->ref; }
const std::string& Measure::tag() const { return impl_->tag; }

Measure Measure::with_tag(std::string tag) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->tag = std::move(tag);
  return Measure(impl);
}

const FamilyTag& Measure::family() const { return impl_->family; }
bool Measure::is_signed() const { return impl_->is_signed; }
int Measure::dimension() const {
  return impl_->layout == Layout::kGaussianNd ? static_cast<int>(impl_->mean.size()) : 1;
}

double Measure::density(double x) const {
  switch (impl_->layout) {
    case Layout::kFinite: {
      const int k = impl_->ref.cell_of(x);
      return k < 0 ? 0.0 : impl_->cells[static_cast<std::size_t>(k)];
    }
    case Layout::kLine: {
      double d = 0.0;
      for (const auto& [w, c] : impl_->comps) d += w * c.pdf(x);
      return d;
    }
    case Layout::kGaussianNd:
      throw std::invalid_argument("density: d-dimensional measure needs a d-vector");
  }
  return 0.0;
}

double Measure::density(std::span<const double> x) const {
  if (impl_->layout != Layout::kGaussianNd) {
    if (x.size() != 1) throw std::invalid_argument("density: dimension mismatch");
    return density(x[0]);
  }
  if (x.size() != impl_->mean.size()) throw std::invalid_argument("density: dimension mismatch");
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - impl_->mean[i];
    q += z * z;
  }
  return std::exp(-0.5 * q) / std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(x.size()));
}

double Measure::log_density(double x) const {
  const double d = density(x);
  return d > 0.0 ? std::log(d) : -kInf;
}

bool Measure::has_cdf() const {
  if (impl_->layout == Layout::kGaussianNd) return false;
  if (impl_->layout == Layout::kFinite) return static_cast<bool>(impl_->line_view);
  return std::all_of(impl_->comps.begin(), impl_->comps.end(),
                     [](const auto& wc) { return wc.second.has_cdf(); });
}

double Measure::cdf(double x) const {
  if (impl_->layout == Layout::kFinite) {
    if (!impl_->line_view) throw std::invalid_argument("cdf: signed measure");
    return Measure(impl_->line_view).cdf(x);
  }
  if (impl_->layout == Layout::kGaussianNd) throw std::invalid_argument("cdf: only 1-d measures");
  double f = 0.0;
  for (const auto& [w, c] : impl_->comps) f += w * c.cdf(x);
  for (const Atom& a : impl_->atoms) {
    if (a.x > x) break;
    f += a.mass;
  }
  return std::min(f, 1.0);
}

double Measure::cdf_left(double x) const { return cdf(x) - atom_mass(x); }

bool Measure::cdf_is_piecewise_linear() const {
  if (impl_->layout == Layout::kFinite) return static_cast<bool>(impl_->line_view);
  if (impl_->layout == Layout::kGaussianNd) return false;
  return std::all_of(impl_->comps.begin(), impl_->comps.end(),
                     [](const auto& wc) { return wc.second.cdf_is_piecewise_linear(); });
}

const std::vector<double>& Measure::cell_densities() const {
  if (impl_->layout != Layout::kFinite) throw std::invalid_argument("cell_densities: not a finite measure");
  return impl_->cells;
}

std::vector<double> Measure::cell_probs() const {
  const auto& d = cell_densities();
  std::vector<double> p(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) p[k] = d[k] * impl_->ref.weight(static_cast<int>(k));
  return p;
}

const std::vector<std::pair<double, Component>>& Measure::components() const {
  if (impl_->layout == Layout::kFinite && impl_->line_view) return impl_->line_view->comps;
  return impl_->comps;
}

const std::vector<Atom>& Measure::atoms() const {
  if (impl_->layout == Layout::kFinite && impl_->line_view) return impl_->line_view->atoms;
  return impl_->atoms;
}

double Measure::atom_mass(double x) const {
  const auto& at = atoms();
  auto it = std::lower_bound(at.begin(), at.end(), x, [](const Atom& a, double v) { return a.x < v; });
  return (it != at.end() && it->x == x) ? it->mass : 0.0;
}

bool Measure::has_continuous_part() const { return !components().empty(); }

const std::vector<double>& Measure::mean() const { return impl_->mean; }

double Measure::total_mass() const {
  switch (impl_->layout) {
    case Layout::kFinite: {
      double t = 0.0;
      for (std::size_t k = 0; k < impl_->cells.size(); ++k) {
        t += impl_->cells[k] * impl_->ref.weight(static_cast<int>(k));
      }
      return t;
    }
    case Layout::kLine: return line_total_mass(*impl_);
    case Layout::kGaussianNd: return 1.0;
  }
  return 0.0;
}

bool Measure::is_probability(double tol) const {
  if (impl_->is_signed) {
    for (double v : impl_->cells) {
      if (v < 0.0) return false;
    }
  }
  return std::abs(total_mass() - 1.0) <= tol;
}

std::vector<double> Measure::breakpoints() const {
  std::vector<double> bp;
  if (impl_->layout == Layout::kFinite && impl_->ref.kind() == ReferenceMeasure::Kind::kUniformPartition) {
    return impl_->ref.edges();
  }
  for (const auto& [w, c] : components()) {
    auto b = c.breakpoints();
    bp.insert(bp.end(), b.begin(), b.end());
  }
  for (const Atom& a : atoms()) bp.push_back(a.x);
  return sorted_unique(std::move(bp));
}

std::vector<std::pair<double, int>> Measure::singular_points() const {
  std::vector<std::pair<double, int>> out;
  if (impl_->layout == Layout::kGaussianNd) return out;
  for (const auto& [w, c] : components()) {
    auto s = c.singular_points();
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::pair<double, double> Measure::support() const {
  if (impl_->layout == Layout::kGaussianNd) return {-kInf, kInf};
  if (impl_->layout == Layout::kFinite && impl_->ref.kind() == ReferenceMeasure::Kind::kUniformPartition) {
    return {impl_->ref.lo(), impl_->ref.hi()};
  }
  double lo = kInf, hi = -kInf;
  for (const auto& [w, c] : components()) {
    auto [a, b] = c.support();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  for (const Atom& a : atoms()) {
    lo = std::min(lo, a.x);
    hi = std::max(hi, a.x);
  }
  return {lo, hi};
}

std::pair<double, double> Measure::effective_range() const {
  if (impl_->layout != Layout::kLine) return support();
  double lo = kInf, hi = -kInf;
  for (const auto& [w, c] : impl_->comps) {
    auto [a, b] = c.effective_range();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  for (const Atom& a : impl_->atoms) {
    lo = std::min(lo, a.x);
    hi = std::max(hi, a.x);
  }
  return {lo, hi};
}

Measure Measure::as_line() const {
  if (impl_->layout == Layout::kLine) return *this;
  if (impl_->layout == Layout::kFinite && impl_->line_view) return Measure(impl_->line_view);
  throw std::invalid_argument("as_line: measure has no representation on the line");
}

bool Measure::has_sampler() const {
  if (impl_->is_signed) return false;
  if (impl_->layout != Layout::kLine) return true;
  return std::all_of(impl_->comps.begin(), impl_->comps.end(), [](const auto& wc) {
    return wc.second.kind != Component::Kind::kCustom || wc.second.custom->quantile ||
           wc.second.custom->cdf;
  });
}

void Measure::draw(Rng& rng, double* out) const {
  switch (impl_->layout) {
    case Layout::kGaussianNd:
      for (std::size_t i = 0; i < impl_->mean.size(); ++i) {
        out[i] = impl_->mean[i] + normal_quantile(rng.uniform());
      }
      return;
    case Layout::kFinite:
      if (!impl_->line_view) throw std::invalid_argument("draw: signed measure has no sampler");
      Measure(impl_->line_view).draw(rng, out);
      return;
    case Layout::kLine: break;
  }
  const auto& comps = impl_->comps;
  const auto& atoms = impl_->atoms;
  if (atoms.empty() && comps.size() == 1) {
    out[0] = comps.front().second.quantile(rng.uniform());
    return;
  }
  double total = line_total_mass(*impl_);
  double u = rng.uniform() * total;
  for (const auto& [w, c] : comps) {
    const double mass = c.kind == Component::Kind::kPiecewiseConstant ? w * c.cum.back() : w;
    if (u < mass) {
      out[0] = c.quantile(rng.uniform());
      return;
    }
    u -= mass;
  }
  for (const Atom& a : atoms) {
    if (u < a.mass) {
      out[0] = a.x;
      return;
    }
    u -= a.mass;
  }
  out[0] = atoms.empty() ? comps.back().second.quantile(rng.uniform()) : atoms.back().x;
}

// ---------------------------------------------------------------------------
// Sample

Sample::Sample(std::vector<double> points, int dim) : points_(std::move(points)), dim_(dim) {
  if (dim < 1) throw std::invalid_argument("Sample: dimension must be >= 1");
  if (points_.empty()) throw std::invalid_argument("Sample: empty sample");
  if (points_.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("Sample: point count is not a multiple of the dimension");
  }
  for (double v : points_) {
    if (std::isnan(v)) throw std::invalid_argument("Sample: NaN observation");
  }
}

std::vector<double> Sample::sorted() const {
  if (dim_ != 1) throw std::invalid_argument("Sample::sorted: 1-d samples only");
  std::vector<double> s = points_;
  std::sort(s.begin(), s.end());
  return s;
}

Sample sample_from(const Measure& m, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_from: n must be >= 1");
  if (!m.has_sampler()) throw std::invalid_argument("sample_from: measure has no sampler");
  const std::size_t d = static_cast<std::size_t>(m.dimension());
  std::vector<double> pts(n * d);
  for (std::size_t i = 0; i < n; ++i) m.draw(rng, pts.data() + i * d);
  return Sample(std::move(pts), static_cast<int>(d));
}

Sample sample_from(const Measure& m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed, 0);
  return sample_from(m, n, rng);
}

Sample sample_from(const std::vector<Measure>& marginals, Rng& rng) {
  if (marginals.empty()) throw std::invalid_argument("sample_from: no marginals");
  const std::size_t d = static_cast<std::size_t>(marginals.front().dimension());
  std::vector<double> pts(marginals.size() * d);
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    if (static_cast<std::size_t>(marginals[i].dimension()) != d) {
      throw std::invalid_argument("sample_from: marginals differ in dimension");
    }
    marginals[i].draw(rng, pts.data() + i * d);
  }
  return Sample(std::move(pts), static_cast<int>(d));
}

std::function<double(double)> empirical_cdf(const Sample& sample) {
  if (sample.n() == 0) throw std::invalid_argument("empirical_cdf: empty sample");
  auto sorted = std::make_shared<std::vector<double>>(sample.sorted());
  return [sorted](double t) {
    const auto it = std::upper_bound(sorted->begin(), sorted->end(), t);
    return static_cast<double>(it - sorted->begin()) / static_cast<double>(sorted->size());
  };
}

Measure empirical_measure(const Sample& sample) {
  if (sample.n() == 0) throw std::invalid_argument("empirical_measure: empty sample");
  std::vector<double> sorted = sample.sorted();
  std::map<double, int> counts;
  for (double x : sorted) ++counts[x];
  std::vector<double> pts, masses;
  for (const auto& [x, c] : counts) {
    pts.push_back(x);
    masses.push_back(static_cast<double>(c) / static_cast<double>(sorted.size()));
  }
  return Measure::on_reference(ReferenceMeasure::counting(pts), masses)
      .with_tag("empirical(n=" + std::to_string(sorted.size()) + ")");
}

}  // namespace ellest
