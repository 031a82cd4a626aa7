#include "ellest/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ellest/assumptions.hpp"
#include "ellest/bounds.hpp"
#include "ellest/parallel.hpp"

namespace ellest {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quantile7(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Sample draw_sample(const Scenario& s, const std::vector<Measure>& marginals, Rng& rng) {
  if (s.truth.kind == TruthSpec::Kind::kIid) return sample_from(marginals.front(), s.n, rng);
  return sample_from(marginals, rng);
}

double candidate_loss(const LossSpec& spec, const Model& model, const std::vector<Measure>& marginals,
                      std::size_t i) {
  const double n = static_cast<double>(marginals.size());
  if (model.is_tuple_form()) return aggregate_loss(spec, marginals, model.tuple(i)) / n;
  return aggregate_loss(spec, marginals, model.candidate(i)) / n;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.median = quantile7(values, 0.5);
  s.q10 = quantile7(values, 0.1);
  s.q25 = quantile7(values, 0.25);
  s.q75 = quantile7(values, 0.75);
  s.q90 = quantile7(values, 0.9);
  s.min = values.front();
  s.max = values.back();
  return s;
}

ExperimentRecord run_estimation(const Scenario& s, int threads) {
  if (s.replications == 0) throw std::invalid_argument("run_estimation: replications must be >= 1");
  const Model model = build(s.model);
  const std::vector<Measure> marginals = true_marginals(s.truth, s.n);
  if (model.is_tuple_form() && model.tuple_length() != s.n) {
    throw std::invalid_argument("run_estimation: tuple length differs from n");
  }

  std::optional<ScoreTable> table;
  LossSpec spec;
  if (s.include_empirical) {
    if (model.is_tuple_form()) throw std::invalid_argument("run_estimation: include_empirical needs an i.i.d. model");
    spec = resolve_loss(s.loss, model);
  } else {
    table.emplace(model, s.loss, threads);
    spec = table->loss();
  }

  const std::size_t m = model.size();
  std::vector<double> cand_loss(m);
  parallel_for(m, threads, [&](std::size_t i) { cand_loss[i] = candidate_loss(spec, model, marginals, i); });

  ExperimentRecord rec;
  rec.digest = scenario_digest(s);
  rec.seed = s.seed;
  rec.n = s.n;
  rec.candidates = m;
  rec.resolution = model.metadata().resolution;
  rec.min_model_loss = *std::min_element(cand_loss.begin(), cand_loss.end());
  rec.rows.resize(s.replications);

  const auto& params = model.metadata().parameters;
  EstimatorOptions opts;
  opts.epsilon = s.epsilon;
  opts.keep_matrix = false;
  parallel_for(s.replications, threads, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(s.seed, k);
    const Sample sample = draw_sample(s, marginals, rng);
    ReplicationRow row;
    row.rep = k;
    EstimateReport rep;
    if (s.include_empirical) {
      const Measure emp = empirical_measure(sample);
      rep = ell_estimate(sample, ScoreTable(model.with_candidate(emp), spec), opts);
      const Measure& chosen = rep.chosen < m ? model.candidate(rep.chosen) : emp;
      row.loss = rep.chosen < m ? cand_loss[rep.chosen] : aggregate_loss(spec, marginals, emp) / static_cast<double>(s.n);
      row.loss_to_empirical = loss(spec, emp, chosen);
    } else {
      rep = ell_estimate(sample, *table, opts);
      row.loss = cand_loss[rep.chosen];
    }
    row.chosen = rep.chosen;
    row.param = rep.chosen < params.size() ? params[rep.chosen] : kNaN;
    row.sup_stat = rep.sup_stat[rep.chosen];
    row.minimizer_count = rep.minimizer_set.size();
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rec.rows[k] = row;
  });

  std::vector<double> losses;
  losses.reserve(rec.rows.size());
  for (const auto& r : rec.rows) losses.push_back(r.loss);
  rec.loss_summary = summarize(std::move(losses));
  return rec;
}

DeviationTable deviation_frequency(const Scenario& s, const std::vector<double>& xis, DeviationBound which,
                                   int threads) {
  const Model model = build(s.model);
  if (which == DeviationBound::kAuto) {
    switch (s.loss.kind) {
      case LossKind::kWasserstein: which = DeviationBound::kWasserstein; break;
      case LossKind::kTv: which = DeviationBound::kVcTv; break;
      case LossKind::kLj:
        if (s.loss.j == 2.0) {
          which = DeviationBound::kL2;
          break;
        }
        [[fallthrough]];
      default: throw std::invalid_argument("deviation_frequency: no bound for loss " + s.loss.name());
    }
  }
  double vc = 0.0, ratio_r = 0.0;
  if (which == DeviationBound::kVcTv) {
    if (!model.metadata().vc_dimension) throw std::invalid_argument("deviation_frequency: model has no VC dimension");
    vc = *model.metadata().vc_dimension;
  }
  if (which == DeviationBound::kL2) ratio_r = resolve_loss(s.loss, model).ratio_r;

  DeviationTable t;
  t.record = run_estimation(s, threads);
  const double n = static_cast<double>(s.n);
  const double approx = t.record.min_model_loss;
  const double reps = static_cast<double>(t.record.rows.size());
  for (double xi : xis) {
    DeviationRow row;
    row.xi = xi;
    switch (which) {
      case DeviationBound::kWasserstein: row.bound = wasserstein_bound(n, xi, s.epsilon, approx); break;
      case DeviationBound::kVcTv: row.bound = vc_bound_tv(vc, n, xi, s.epsilon, approx); break;
      case DeviationBound::kL2: row.bound = l2_bound(ratio_r, n, xi, s.epsilon, approx); break;
      case DeviationBound::kAuto: break;
    }
    std::size_t hits = 0;
    for (const auto& r : t.record.rows) {
      if (r.loss <= row.bound) ++hits;
    }
    row.frequency = static_cast<double>(hits) / reps;
    row.target = -std::expm1(-xi);
    row.lower_limit = row.target - 3.0 * std::sqrt(row.target * (1.0 - row.target) / reps);
    t.rows.push_back(row);
  }
  return t;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need >= 2 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return kNaN;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

RateCurve rate_curve(const Scenario& s, const std::vector<std::size_t>& ns, double grid_exponent, int threads) {
  if (ns.empty()) throw std::invalid_argument("rate_curve: no sample sizes");
  if (s.truth.kind == TruthSpec::Kind::kTuples) throw std::invalid_argument("rate_curve: tuple truths have a fixed n");
  if (s.truth.kind == TruthSpec::Kind::kContaminated && s.truth.alphas.size() != 1) {
    throw std::invalid_argument("rate_curve: contamination must use a single alpha");
  }
  RateCurve c;
  std::vector<double> x, y;
  for (std::size_t n : ns) {
    Scenario sc = s;
    sc.n = n;
    sc.model = s.model.scaled(std::pow(static_cast<double>(ns.front()) / static_cast<double>(n), grid_exponent));
    const ExperimentRecord rec = run_estimation(sc, threads);
    RatePoint p;
    p.n = n;
    p.median_loss = rec.loss_summary.median;
    p.mean_loss = rec.loss_summary.mean;
    p.grid_step = sc.model.step;
    p.candidates = rec.candidates;
    c.points.push_back(p);
    x.push_back(static_cast<double>(n));
    y.push_back(p.median_loss);
  }
  c.slope = ns.size() >= 2 ? log_log_slope(x, y) : kNaN;
  return c;
}

double TestErrorReport::sigma(double bound, std::size_t reps) {
  return std::sqrt(bound * (1.0 - bound) / static_cast<double>(reps));
}

TestErrorReport test_error_mc(const Measure& truth, const Measure& p, const Measure& q, const LossSpec& spec_in,
                              std::size_t n, std::size_t reps, std::uint64_t seed, int threads) {
  if (n == 0 || reps == 0) throw std::invalid_argument("test_error_mc: n and reps must be >= 1");
  const Model pair({p, q}, ModelMetadata{});
  const LossSpec spec = resolve_loss(spec_in, pair);
  const FamilyConstants k = family_constants(spec);

  TestErrorReport r;
  r.reps = reps;
  r.loss_star_p = loss(spec, truth, p);
  r.loss_star_q = loss(spec, truth, q);
  r.defined = r.loss_star_p != r.loss_star_q;
  r.p_is_closer = r.loss_star_p <= r.loss_star_q;
  const double near = std::min(r.loss_star_p, r.loss_star_q);
  const double far = std::max(r.loss_star_p, r.loss_star_q);
  const double dn = static_cast<double>(n);
  if (r.defined) {
    r.gamma = test_gamma(k.a0, k.a1, near, far);
    r.bound_hoeffding = hoeffding_bound(k.a1, r.gamma, dn * far, dn);
    if (k.a2) {
      r.a2 = k.a2;
    } else if (spec.kind == LossKind::kTv) {
      r.a2 = check_cond3bis(pair, kInf).a2;
    }
    if (r.a2) r.bound_bernstein = bernstein_bound(k.a0, k.a1, *r.a2, r.gamma, dn * far);
    if (spec.kind == LossKind::kHellinger) r.bound_hellinger = hellinger_test_bound(near, far, dn);
  } else {
    r.gamma = kInf;
  }

  const ScoreFunction score = make_score(spec, p, q);
  std::vector<signed char> outcome(reps);  // -1 P, +1 Q, 0 tie
  parallel_for(reps, threads, [&](std::size_t i) {
    Rng rng(seed, i);
    const TestOutcome t = run_test(sample_from(truth, n, rng), score);
    outcome[i] = t.decision == Decision::kChooseQ ? 1 : t.decision == Decision::kChooseP ? -1 : 0;
  });
  for (signed char o : outcome) {
    if (o == 0) ++r.ties;
    const bool wrong = r.p_is_closer ? o >= 0 : o <= 0;
    if (wrong) ++r.errors;
  }
  r.empirical_error = r.defined ? static_cast<double>(r.errors) / static_cast<double>(reps) : kNaN;
  return r;
}

AgreementReport compare_with_devroye_lugosi(const Measure& truth, const Measure& p, const Measure& q,
                                            std::size_t n, std::size_t reps, std::uint64_t seed, int threads) {
  const ScoreFunction score = tv_score(p, q);
  const DevroyeLugosiTest dl(p, q);
  std::vector<char> same(reps);
  parallel_for(reps, threads, [&](std::size_t i) {
    Rng rng(seed, i);
    const Sample x = sample_from(truth, n, rng);
    const bool ours_q = run_test(x, score).decision == Decision::kChooseQ;
    const bool theirs_q = dl(x).decision == Decision::kChooseQ;
    same[i] = ours_q == theirs_q ? 1 : 0;
  });
  AgreementReport a;
  a.reps = reps;
  a.agree = static_cast<std::size_t>(std::count(same.begin(), same.end(), 1));
  a.disagree = reps - a.agree;
  return a;
}

std::string records_file_name(const ExperimentRecord& r) {
  return r.digest + "_" + std::to_string(r.seed) + "_records.csv";
}

std::string summary_file_name(const ExperimentRecord& r) {
  return r.digest + "_" + std::to_string(r.seed) + "_summary.json";
}

void write_records_csv(const ExperimentRecord& r, const std::string& path, bool timing) {
  const bool emp = !r.rows.empty() && r.rows.front().loss_to_empirical.has_value();
  std::ofstream out = open_out(path);
  out << "rep,chosen,param,loss,sup_stat,minimizer_count";
  if (emp) out << ",loss_to_empirical";
  if (timing) out << ",runtime_ms";
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.rep << ',' << row.chosen << ',' << format_number(row.param) << ',' << format_number(row.loss) << ','
        << format_number(row.sup_stat) << ',' << row.minimizer_count;
    if (emp) out << ',' << format_number(row.loss_to_empirical.value_or(kNaN));
    if (timing) out << ',' << format_number(row.runtime_ms);
    out << '\n';
  }
}

void write_records_jsonl(const ExperimentRecord& r, const std::string& path, bool timing) {
  std::ofstream out = open_out(path);
  for (const auto& row : r.rows) {
    json j;
    j["rep"] = row.rep;
    j["chosen"] = row.chosen;
    j["param"] = std::isnan(row.param) ? json(nullptr) : json(row.param);
    j["loss"] = row.loss;
    j["sup_stat"] = row.sup_stat;
    j["minimizer_count"] = row.minimizer_count;
    if (row.loss_to_empirical) j["loss_to_empirical"] = *row.loss_to_empirical;
    if (timing) j["runtime_ms"] = row.runtime_ms;
    out << j.dump() << '\n';
  }
}

void write_summary_json(const ExperimentRecord& r, const std::string& path, const json& extra) {
  json j;
  j["format_version"] = kFormatVersion;
  j["digest"] = r.digest;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["replications"] = r.rows.size();
  j["candidates"] = r.candidates;
  j["resolution"] = r.resolution;
  j["min_model_loss"] = r.min_model_loss;
  const Summary& s = r.loss_summary;
  j["loss"] = {{"mean", s.mean}, {"median", s.median}, {"q10", s.q10}, {"q25", s.q25},
               {"q75", s.q75},   {"q90", s.q90},       {"min", s.min}, {"max", s.max}};
  j["records_file"] = records_file_name(r);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_curve_csv(const RateCurve& c, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "n,median_loss,mean_loss,grid_step,candidates\n";
  for (const auto& p : c.points) {
    out << p.n << ',' << format_number(p.median_loss) << ',' << format_number(p.mean_loss) << ','
        << format_number(p.grid_step) << ',' << p.candidates << '\n';
  }
}

void write_deviation_csv(const DeviationTable& t, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "xi,bound,frequency,target,lower_limit\n";
  for (const auto& r : t.rows) {
    out << format_number(r.xi) << ',' << format_number(r.bound) << ',' << format_number(r.frequency) << ','
        << format_number(r.target) << ',' << format_number(r.lower_limit) << '\n';
  }
}

}  // namespace ellest
