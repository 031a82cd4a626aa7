#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ellest/assumptions.hpp"
#include "ellest/config.hpp"
#include "ellest/distances.hpp"
#include "ellest/estimator.hpp"
#include "ellest/numeric.hpp"
#include "ellest/parallel.hpp"
#include "ellest/robust_tests.hpp"
#include "ellest/sim.hpp"

namespace ellest {

namespace {

using nlohmann::json;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::string out;
  bool describe = false;
  std::optional<int> threads;
  std::string loss;
  std::optional<std::size_t> space_size;
  std::optional<std::size_t> triples;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--seed", f.seed, "Random seed");
  sub->add_option("--epsilon", f.epsilon, "Slack of the minimizer set")->check(CLI::PositiveNumber);
  sub->add_option("--out", f.out, "Output directory");
  sub->add_flag("--describe", f.describe, "Print the resolved configuration and exit");
  sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

std::filesystem::path out_dir(const RunConfig& c) {
  std::filesystem::path dir(c.output.directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output.directory: cannot create '" + c.output.directory + "'");
  }
  return dir;
}

bool wants(const RunConfig& c, const std::string& format) {
  for (const auto& f : c.output.formats) {
    if (f == format) return true;
  }
  return false;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw ConfigError("output.directory: cannot write " + path.string());
  o << j.dump(2) << '\n';
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(format_number(x)); }

std::uint64_t seed_of(const RunConfig& c) { return c.seed.value_or(0); }

int run_estimate(const RunConfig& c, std::ostream& out) {
  const Scenario& s = *c.scenario;
  const Model model = build(s.model);
  const std::vector<Measure> marginals = true_marginals(s.truth, s.n);
  Sample sample;
  if (!c.data.empty()) {
    sample = Sample(c.data);
  } else {
    Rng rng(seed_of(c), 0);
    sample = s.truth.kind == TruthSpec::Kind::kIid ? sample_from(marginals.front(), s.n, rng)
                                                   : sample_from(marginals, rng);
  }
  const int threads = resolve_threads(c.threads);
  const ScoreTable table(model, s.loss, threads);
  EstimatorOptions opts;
  opts.epsilon = c.epsilon;
  opts.threads = threads;
  opts.keep_matrix = false;
  const EstimateReport r = ell_estimate(sample, table, opts);
  const double n = static_cast<double>(s.n);
  const double attained = model.is_tuple_form() ? aggregate_loss(table.loss(), marginals, model.tuple(r.chosen)) / n
                                                : aggregate_loss(table.loss(), marginals, model.candidate(r.chosen)) / n;
  const auto& params = model.metadata().parameters;

  json j;
  j["format_version"] = kFormatVersion;
  j["digest"] = scenario_digest(s);
  j["seed"] = seed_of(c);
  j["n"] = s.n;
  j["candidates"] = model.size();
  j["epsilon"] = c.epsilon;
  j["chosen"] = r.chosen;
  if (r.chosen < params.size()) j["chosen_param"] = params[r.chosen];
  j["chosen_sup_stat"] = r.sup_stat[r.chosen];
  j["minimizer_set"] = r.minimizer_set;
  j["sup_stat"] = r.sup_stat;
  j["loss_to_truth"] = number_or_null(attained);
  const auto dir = out_dir(c);
  const auto file = dir / (scenario_digest(s) + "_" + std::to_string(seed_of(c)) + "_estimate.json");
  write_json(file, j);
  out << "chosen " << r.chosen;
  if (r.chosen < params.size()) out << " (param " << format_number(params[r.chosen]) << ")";
  out << ", sup statistic " << format_number(r.sup_stat[r.chosen]) << ", minimizer set size " << r.minimizer_set.size()
      << ", loss to truth " << format_number(attained) << "\nreport: " << file.string() << '\n';
  return kExitOk;
}

json test_error_json(const TestErrorReport& r) {
  json j;
  j["replications"] = r.reps;
  j["errors"] = r.errors;
  j["ties"] = r.ties;
  j["defined"] = r.defined;
  j["empirical_error"] = number_or_null(r.empirical_error);
  j["closer"] = r.defined ? (r.p_is_closer ? "P" : "Q") : "neither";
  j["loss_star_p"] = number_or_null(r.loss_star_p);
  j["loss_star_q"] = number_or_null(r.loss_star_q);
  j["gamma"] = number_or_null(r.gamma);
  j["bound_hoeffding"] = r.bound_hoeffding;
  if (r.bound_bernstein) j["bound_bernstein"] = *r.bound_bernstein;
  if (r.a2) j["a2"] = *r.a2;
  if (r.bound_hellinger) {
    j["bound_hellinger"] = r.bound_hellinger->bound;
    j["gamma_hellinger"] = r.bound_hellinger->gamma;
  }
  j["binomial_sigma_at_hoeffding"] = TestErrorReport::sigma(r.bound_hoeffding, r.reps);
  return j;
}

int run_test_command(const RunConfig& c, std::ostream& out) {
  const PairSpec& ps = c.pair;
  const Measure p = ps.p.build();
  const Measure q = ps.q.build();
  Sample sample;
  if (!ps.data.empty()) {
    sample = Sample(ps.data);
  } else {
    Rng rng(seed_of(c), 0);
    sample = sample_from(ps.truth->build(), ps.n, rng);
  }
  const TestOutcome t = run_test(sample, p, q, ps.loss);
  json j;
  j["format_version"] = kFormatVersion;
  j["seed"] = seed_of(c);
  j["loss"] = to_json(ps.loss);
  j["decision"] = to_string(t.decision);
  j["statistic"] = t.statistic;
  out << "decision " << to_string(t.decision) << ", statistic " << format_number(t.statistic) << '\n';
  if (ps.devroye_lugosi) {
    const TestOutcome dl = devroye_lugosi_test(sample, p, q);
    j["devroye_lugosi"] = {{"decision", to_string(dl.decision)}, {"statistic", dl.statistic}};
    out << "devroye-lugosi decision " << to_string(dl.decision) << ", statistic " << format_number(dl.statistic)
        << '\n';
  }
  const int threads = resolve_threads(c.threads);
  if (ps.replications > 0) {
    const Measure truth = ps.truth->build();
    const TestErrorReport r = test_error_mc(truth, p, q, ps.loss, ps.n, ps.replications, seed_of(c), threads);
    j["error_study"] = test_error_json(r);
    out << "error study: " << r.errors << "/" << r.reps << " wrong decisions, gamma " << format_number(r.gamma)
        << ", hoeffding bound " << format_number(r.bound_hoeffding) << '\n';
    if (ps.devroye_lugosi && ps.loss.kind == LossKind::kTv) {
      const AgreementReport a = compare_with_devroye_lugosi(truth, p, q, ps.n, ps.replications, seed_of(c), threads);
      j["devroye_lugosi_agreement"] = {{"replications", a.reps}, {"agree", a.agree}, {"disagree", a.disagree}};
    }
  }
  const auto file = out_dir(c) / ("test_" + std::to_string(seed_of(c)) + ".json");
  write_json(file, j);
  out << "report: " << file.string() << '\n';
  return kExitOk;
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  const Scenario& s = *c.scenario;
  const int threads = resolve_threads(c.threads);
  const auto dir = out_dir(c);
  const std::string stem = scenario_digest(s) + "_" + std::to_string(s.seed);

  auto write_record = [&](const ExperimentRecord& rec, const json& extra) {
    if (wants(c, "csv")) write_records_csv(rec, (dir / records_file_name(rec)).string(), c.output.timing);
    if (wants(c, "json-lines")) write_records_jsonl(rec, (dir / (stem + "_records.jsonl")).string(), c.output.timing);
    if (wants(c, "summary")) write_summary_json(rec, (dir / summary_file_name(rec)).string(), extra);
  };

  switch (c.experiment.type) {
    case ExperimentType::kEstimation: {
      const ExperimentRecord rec = run_estimation(s, threads);
      write_record(rec, json::object());
      out << "replications " << rec.rows.size() << ", median loss " << format_number(rec.loss_summary.median)
          << ", min model loss " << format_number(rec.min_model_loss) << '\n';
      break;
    }
    case ExperimentType::kDeviation: {
      const DeviationTable t = deviation_frequency(s, c.experiment.xis, DeviationBound::kAuto, threads);
      json rows = json::array();
      for (const auto& r : t.rows) {
        rows.push_back({{"xi", r.xi},
                        {"bound", r.bound},
                        {"frequency", r.frequency},
                        {"target", r.target},
                        {"lower_limit", r.lower_limit}});
        out << "xi " << format_number(r.xi) << ": frequency " << format_number(r.frequency) << " (target "
            << format_number(r.target) << ")\n";
      }
      write_record(t.record, {{"deviation", rows}});
      write_deviation_csv(t, (dir / (stem + "_deviation.csv")).string());
      break;
    }
    case ExperimentType::kRate: {
      const RateCurve rc = rate_curve(s, c.experiment.ns, c.experiment.grid_exponent, threads);
      write_curve_csv(rc, (dir / (stem + "_curve.csv")).string());
      json pts = json::array();
      for (const auto& p : rc.points) {
        pts.push_back({{"n", p.n}, {"median_loss", p.median_loss}, {"mean_loss", p.mean_loss},
                       {"grid_step", p.grid_step}, {"candidates", p.candidates}});
      }
      if (wants(c, "summary")) {
        write_json(dir / (stem + "_summary.json"), {{"format_version", kFormatVersion},
                                                    {"digest", scenario_digest(s)},
                                                    {"seed", s.seed},
                                                    {"points", pts},
                                                    {"slope", number_or_null(rc.slope)}});
      }
      out << "fitted log-log slope " << format_number(rc.slope) << '\n';
      break;
    }
  }
  out << "outputs in " << dir.string() << '\n';
  return kExitOk;
}

int run_distances(const RunConfig& c, std::ostream& out) {
  const Measure p = c.pair.p.build();
  const Measure q = c.pair.q.build();
  json j;
  j["format_version"] = kFormatVersion;
  auto put = [&](const std::string& name, auto f) {
    try {
      const double v = f();
      j[name] = number_or_null(v);
      out << name << ' ' << format_number(v) << '\n';
    } catch (const std::invalid_argument& e) {
      j[name] = nullptr;
      out << name << " n/a (" << e.what() << ")\n";
    }
  };
  put("tv", [&] { return tv_distance(p, q); });
  put("hellinger_sq", [&] { return hellinger_sq(p, q); });
  put("kl", [&] { return kl_divergence(p, q); });
  put("wasserstein", [&] { return wasserstein1(p, q); });
  put("l2", [&] { return lj_distance(p, q, 2.0); });
  const auto file = out_dir(c) / "distances.json";
  write_json(file, j);
  return kExitOk;
}

json assumption_json(const AssumptionReport& r) {
  return {{"pass", r.pass},
          {"worst_slack", number_or_null(r.worst_slack)},
          {"triples", r.triples},
          {"offending", r.offending}};
}

int run_check(const RunConfig& c, std::ostream& out) {
  const AssumptionSpec& a = c.assumptions;
  const SuiteReport r = random_assumption_suite(a.loss, a.spaces, a.space_size, seed_of(c));
  json j;
  j["format_version"] = kFormatVersion;
  j["loss"] = to_json(a.loss);
  j["spaces"] = r.spaces;
  j["space_size"] = a.space_size;
  j["assumption1"] = assumption_json(r.assumption1);
  out << "assumption 1: " << (r.assumption1.pass ? "pass" : "FAIL") << ", worst slack "
      << format_number(r.assumption1.worst_slack) << " over " << r.assumption1.triples << " triples\n";
  if (!r.assumption1.pass) out << "  " << r.assumption1.offending << '\n';
  if (r.assumption2_checked) {
    j["assumption2"] = assumption_json(r.assumption2);
    out << "assumption 2: " << (r.assumption2.pass ? "pass" : "FAIL") << ", worst slack "
        << format_number(r.assumption2.worst_slack) << '\n';
    if (!r.assumption2.pass) out << "  " << r.assumption2.offending << '\n';
  }
  if (a.loss.kind == LossKind::kTv) {
    j["cond3bis_passed"] = r.cond3bis_passed;
    out << "cond-3bis passed on " << r.cond3bis_passed << " of " << r.spaces << " spaces\n";
  }
  write_json(out_dir(c) / ("assumptions_" + std::to_string(seed_of(c)) + ".json"), j);
  return kExitOk;
}

}  // namespace

namespace {

std::string describe(Command cmd) {
  switch (cmd) {
    case Command::kEstimate: return "Compute the l-estimator on inline data or a sample drawn from the truth";
    case Command::kTest: return "Run the robust test between two candidates and study its error";
    case Command::kSimulate: return "Replicated estimation: records, deviation and rate experiments";
    case Command::kDistances: return "Distances between two measures under every supported loss";
    case Command::kCheckAssumptions: return "Exact check of the loss assumptions on random finite spaces";
  }
  return {};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust l-estimation: estimators, robust tests and simulations"};
  app.require_subcommand(1);
  Flags f;
  struct Sub {
    Command command;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  for (Command cmd : {Command::kEstimate, Command::kTest, Command::kSimulate, Command::kDistances,
                      Command::kCheckAssumptions}) {
    CLI::App* s = app.add_subcommand(to_string(cmd), describe(cmd));
    add_common(s, f);
    subs.push_back({cmd, s});
  }
  CLI::App* check = subs.back().app;
  check->add_option("--loss", f.loss, "Loss: tv, hellinger, kl, lj:<j>, linf");
  check->add_option("--space-size", f.space_size, "Points per random space")->check(CLI::Range(2, 1000000));
  check->add_option("--triples", f.triples, "Number of random spaces (3 candidates and 3 probes each)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  Command command = Command::kEstimate;
  for (const auto& s : subs) {
    if (s.app->parsed()) command = s.command;
  }

  try {
    RunConfig c;
    if (!f.config.empty()) {
      c = load_run_config(f.config, command);
    } else if (command == Command::kCheckAssumptions) {
      if (f.loss.empty()) throw ConfigError("--loss: required without --config");
      c.command = command;
      c.assumptions.loss = loss_spec_from_string(f.loss);
    } else {
      throw ConfigError("--config: required for " + to_string(command));
    }
    if (command == Command::kCheckAssumptions) {
      if (!f.loss.empty()) c.assumptions.loss = loss_spec_from_string(f.loss);
      if (f.space_size) c.assumptions.space_size = *f.space_size;
      if (f.triples) c.assumptions.spaces = *f.triples;
    }
    if (f.seed) c.seed = f.seed;
    if (f.epsilon) c.epsilon = *f.epsilon;
    if (!f.out.empty()) c.output.directory = f.out;
    if (f.threads) c.threads = *f.threads;
    finalize(c);

    if (f.describe) {
      out << to_json(c).dump(2) << '\n';
      return kExitOk;
    }
    switch (command) {
      case Command::kEstimate: return run_estimate(c, out);
      case Command::kTest: return run_test_command(c, out);
      case Command::kSimulate: return run_simulate(c, out);
      case Command::kDistances: return run_distances(c, out);
      case Command::kCheckAssumptions: return run_check(c, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace ellest
