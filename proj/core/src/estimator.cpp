#include "ellest/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ellest/distances.hpp"
#include "ellest/parallel.hpp"

namespace ellest {

namespace {

[[noreturn]] void rethrow_for_pair(const std::exception& e, std::size_t i, std::size_t j) {
  const std::string msg = "score for pair (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.what();
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) throw NumericalError(msg);
  throw std::invalid_argument(msg);
}

std::vector<std::pair<std::size_t, std::size_t>> unordered_pairs(std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) out.emplace_back(i, j);
  }
  return out;
}

// Candidate densities at the sample points, so that density-based scores do
// not re-evaluate them for every pair.
struct DensityTable {
  enum class Mode { kNone, kFinite, kLine, kNd };
  Mode mode = Mode::kNone;
  std::vector<std::vector<double>> cont;
  std::vector<std::vector<double>> atom;

  PairDensity at(std::size_t i, std::size_t j, std::size_t k) const {
    if (mode == Mode::kLine) {
      const double ai = atom[i][k], aj = atom[j][k];
      if (ai > 0.0 || aj > 0.0) return {ai, aj};
    }
    return {cont[i][k], cont[j][k]};
  }
};

DensityTable density_table(const Model& model, const Sample& sample) {
  DensityTable t;
  const auto& cands = model.candidates();
  auto all = [&cands](auto pred) { return std::all_of(cands.begin(), cands.end(), pred); };
  if (sample.dim() > 1) {
    if (all([](const Measure& m) { return m.layout() == Measure::Layout::kGaussianNd; })) t.mode = DensityTable::Mode::kNd;
  } else if (all([&](const Measure& m) {
               return m.layout() == Measure::Layout::kFinite && m.reference() == cands.front().reference();
             })) {
    t.mode = DensityTable::Mode::kFinite;
  } else if (all([](const Measure& m) { return m.layout() == Measure::Layout::kLine; })) {
    t.mode = DensityTable::Mode::kLine;
  }
  if (t.mode == DensityTable::Mode::kNone) return t;
  const std::size_t n = sample.n();
  t.cont.assign(cands.size(), std::vector<double>(n));
  if (t.mode == DensityTable::Mode::kLine) t.atom.assign(cands.size(), std::vector<double>(n));
  for (std::size_t c = 0; c < cands.size(); ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      if (t.mode == DensityTable::Mode::kNd) {
        t.cont[c][k] = cands[c].density(sample.point(k));
      } else {
        t.cont[c][k] = cands[c].density(sample[k]);
        if (t.mode == DensityTable::Mode::kLine) t.atom[c][k] = cands[c].atom_mass(sample[k]);
      }
    }
  }
  return t;
}

}  // namespace

ScoreTable::ScoreTable(const Model& model, const LossSpec& spec, int threads, const ScoreOptions& opts)
    : model_(model), spec_(resolve_loss(spec, model)) {
  const std::size_t m = model_.size();
  const auto pairs = unordered_pairs(m);
  pairs_.resize(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    try {
      if (model_.is_tuple_form()) {
        const auto& ti = model_.tuple(i);
        const auto& tj = model_.tuple(j);
        std::vector<ScoreFunction> s;
        s.reserve(ti.size());
        for (std::size_t k = 0; k < ti.size(); ++k) {
          // Shared coordinates (same translate) give the same score object.
          if (k > 0 && ti[k].same_object(ti[k - 1]) && tj[k].same_object(tj[k - 1])) {
            s.push_back(s.back());
          } else {
            s.push_back(make_score(spec_, ti[k], tj[k], opts));
          }
        }
        pairs_[idx] = std::move(s);
      } else {
        pairs_[idx] = {make_score(spec_, model_.candidate(i), model_.candidate(j), opts)};
      }
    } catch (const std::exception& e) {
      rethrow_for_pair(e, i, j);
    }
  });
}

Matrix pairwise_statistic(const Sample& sample, const ScoreTable& table, int threads) {
  const Model& model = table.model();
  const std::size_t m = model.size();
  Matrix out(m);
  if (m == 1) return out;
  const auto pairs = unordered_pairs(m);

  if (model.is_tuple_form()) {
    if (sample.n() != model.tuple_length() || sample.dim() != 1) {
      throw std::invalid_argument("pairwise_statistic: sample size differs from the tuple length");
    }
    parallel_for(pairs.size(), threads, [&](std::size_t idx) {
      const auto [i, j] = pairs[idx];
      const auto& sc = table.tuple_scores(i, j);
      double s = 0.0;
      for (std::size_t k = 0; k < sample.n(); ++k) s += sc[k](sample[k]);
      out(i, j) = s;
      out(j, i) = -s;
    });
    return out;
  }

  std::vector<double> sorted, prefix;
  if (sample.dim() == 1) {
    sorted = sample.sorted();
    prefix.resize(sorted.size() + 1, 0.0);
    for (std::size_t k = 0; k < sorted.size(); ++k) prefix[k + 1] = prefix[k] + sorted[k];
  }
  bool need_table = false;
  for (std::size_t idx = 0; idx < pairs.size() && !need_table; ++idx) {
    const ScoreFunction& t = table.score(pairs[idx].first, pairs[idx].second);
    need_table = t.density_based() && !t.has_interval_form();
  }
  const DensityTable dens = need_table ? density_table(model, sample) : DensityTable{};

  parallel_for(pairs.size(), threads, [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    const ScoreFunction& t = table.score(i, j);
    double s = 0.0;
    if (t.kind() == ScoreKind::kZero) {
      s = 0.0;
    } else if (t.density_based() && !t.has_interval_form() && dens.mode != DensityTable::Mode::kNone) {
      for (std::size_t k = 0; k < sample.n(); ++k) {
        const PairDensity d = dens.at(i, j, k);
        s += t.from_densities(d.p, d.q);
      }
    } else if (sample.dim() == 1) {
      s = t.sum_sorted(sorted, &prefix);
    } else {
      s = t.sum(sample);
    }
    out(i, j) = s;
    out(j, i) = -s;
  });
  return out;
}

Matrix pairwise_statistic(const Sample& sample, const Model& model, const LossSpec& spec, int threads) {
  return pairwise_statistic(sample, ScoreTable(model, spec, threads), threads);
}

EstimateReport report_from_matrix(Matrix pairwise, const EstimatorOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw std::invalid_argument("ell_estimate: epsilon must be > 0");
  const std::size_t m = pairwise.n;
  if (m == 0) throw std::invalid_argument("ell_estimate: empty model");
  EstimateReport r;
  r.epsilon = opts.epsilon;
  r.sup_stat.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;  // the diagonal entry
    for (std::size_t j = 0; j < m; ++j) s = std::max(s, pairwise(i, j));
    r.sup_stat[i] = s;
  }
  const double best = *std::min_element(r.sup_stat.begin(), r.sup_stat.end());
  r.chosen = static_cast<std::size_t>(std::find(r.sup_stat.begin(), r.sup_stat.end(), best) - r.sup_stat.begin());
  const double cut = best + opts.epsilon + opts.slack * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < m; ++i) {
    if (r.sup_stat[i] <= cut) r.minimizer_set.push_back(i);
  }
  if (opts.keep_matrix) r.pairwise = std::move(pairwise);
  return r;
}

EstimateReport ell_estimate(const Sample& sample, const ScoreTable& table, const EstimatorOptions& opts) {
  EstimateReport r = report_from_matrix(pairwise_statistic(sample, table, opts.threads), opts);
  if (opts.keep_matrix && !table.model().is_tuple_form()) {
    const std::size_t m = table.size();
    r.constant_parts = Matrix(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double c = table.score(i, j).constant_part();
        r.constant_parts(i, j) = c;
        r.constant_parts(j, i) = -c;
      }
    }
  }
  return r;
}

EstimateReport ell_estimate(const Sample& sample, const Model& model, const LossSpec& spec,
                            const EstimatorOptions& opts) {
  return ell_estimate(sample, ScoreTable(model, spec, opts.threads), opts);
}

Measure histogram_estimator(const Sample& sample, const ReferenceMeasure& partition) {
  if (partition.kind() != ReferenceMeasure::Kind::kUniformPartition) {
    throw std::invalid_argument("histogram_estimator: needs a uniform partition");
  }
  if (sample.n() == 0) throw std::invalid_argument("histogram_estimator: empty sample");
  const auto d = static_cast<std::size_t>(partition.cells());
  std::vector<double> counts(d, 0.0);
  for (std::size_t k = 0; k < sample.n(); ++k) {
    const int c = partition.cell_of(sample[k]);
    if (c >= 0) counts[static_cast<std::size_t>(c)] += 1.0;
  }
  const double n = static_cast<double>(sample.n());
  for (double& c : counts) c = static_cast<double>(d) * c / n;
  return Measure::on_reference(partition, std::move(counts)).with_tag("histogram-estimate");
}

double median_tv_estimator(const Sample& sample) {
  if (sample.dim() != 1) throw std::invalid_argument("median_tv_estimator: 1-d sample expected");
  if (sample.n() < 2) throw std::invalid_argument("median_tv_estimator: need n >= 2");
  const auto s = sample.sorted();
  const std::size_t k = (s.size() + 1) / 2;  // ceil(n/2), 1-based
  return 0.5 * (s[k - 1] + s[k]);
}

}  // namespace ellest
