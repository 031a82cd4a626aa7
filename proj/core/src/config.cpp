#include "ellest/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json_reader.hpp"

namespace ellest {

using detail::fail;
using detail::Obj;
using nlohmann::json;

namespace {

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> m = {{"estimate", Command::kEstimate},
                                                   {"test", Command::kTest},
                                                   {"simulate", Command::kSimulate},
                                                   {"distances", Command::kDistances},
                                                   {"check-assumptions", Command::kCheckAssumptions}};
  return m;
}

const std::map<std::string, ExperimentType>& experiment_types() {
  static const std::map<std::string, ExperimentType> m = {{"estimation", ExperimentType::kEstimation},
                                                          {"deviation", ExperimentType::kDeviation},
                                                          {"rate", ExperimentType::kRate}};
  return m;
}

template <class Map, class V>
std::string name_of(const Map& m, V v) {
  for (const auto& [k, x] : m) {
    if (x == v) return k;
  }
  return {};
}

OutputSpec output_from_json(const json& j, const std::string& path) {
  Obj o(j, path);
  OutputSpec out;
  out.directory = o.str("directory", out.directory);
  if (out.directory.empty()) fail(o.at("directory"), "must be nonempty");
  if (const json* f = o.find("formats")) {
    if (!f->is_array()) fail(o.at("formats"), "expected an array of strings");
    out.formats.clear();
    for (const auto& x : *f) {
      if (!x.is_string()) fail(o.at("formats"), "expected an array of strings");
      const std::string s = x.get<std::string>();
      if (s != "csv" && s != "json-lines" && s != "summary") {
        fail(o.at("formats"), "unknown format '" + s + "' (csv, json-lines, summary)");
      }
      out.formats.push_back(s);
    }
  }
  out.timing = o.boolean("timing", false);
  o.done();
  return out;
}

ExperimentSpec experiment_from_json(const json& j, const std::string& path) {
  Obj o(j, path);
  ExperimentSpec e;
  const std::string type = o.str("type", "estimation");
  const auto it = experiment_types().find(type);
  if (it == experiment_types().end()) fail(o.at("type"), "expected estimation, deviation or rate");
  e.type = it->second;
  if (e.type == ExperimentType::kDeviation) {
    e.xis = o.nums("xis", e.xis);
    if (e.xis.empty()) fail(o.at("xis"), "must be nonempty");
    for (double x : e.xis) {
      if (!(x >= 0.0)) fail(o.at("xis"), "values must be >= 0");
    }
  }
  if (e.type == ExperimentType::kRate) {
    const json& ns = o.need("ns");
    if (!ns.is_array() || ns.size() < 2) fail(o.at("ns"), "expected at least two sample sizes");
    for (const auto& x : ns) {
      if (!x.is_number_unsigned() || x.get<std::size_t>() == 0) fail(o.at("ns"), "expected positive integers");
      e.ns.push_back(x.get<std::size_t>());
    }
    e.grid_exponent = o.num("grid_exponent", 0.0);
  }
  o.done();
  return e;
}

}  // namespace

std::string to_string(Command c) { return name_of(commands(), c); }

Command command_from_string(const std::string& s) {
  const auto it = commands().find(s);
  if (it == commands().end()) throw ConfigError("command: unknown command '" + s + "'");
  return it->second;
}

LossSpec loss_spec_from_string(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  json j;
  j["kind"] = kind;
  if (colon != std::string::npos) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("--loss: bad parameter in '" + s + "'");
    }
    if (kind == "kl") {
      j["a"] = v;
    } else if (kind == "lj") {
      j["j"] = v;
    } else if (kind == "linf") {
      j["cells"] = static_cast<long long>(v);
    } else {
      throw ConfigError("--loss: '" + kind + "' takes no parameter");
    }
  }
  try {
    return loss_spec_from_json(j, "--loss");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--loss: ") + e.what());
  }
}

RunConfig run_config_from_json(const json& j, std::optional<Command> command, const std::string& path) {
  Obj o(j, path);
  RunConfig c;
  if (const json* cmd = o.find("command")) {
    if (!cmd->is_string()) fail(o.at("command"), "expected a string");
    const auto it = commands().find(cmd->get<std::string>());
    if (it == commands().end()) fail(o.at("command"), "unknown command '" + cmd->get<std::string>() + "'");
    if (command && *command != it->second) {
      fail(o.at("command"), "config is for '" + it->first + "' but '" + to_string(*command) + "' was requested");
    }
    c.command = it->second;
  } else if (command) {
    c.command = *command;
  } else {
    fail(o.at("command"), "required key missing");
  }

  if (const json* seed = o.find("seed")) {
    if (!seed->is_number_unsigned()) fail(o.at("seed"), "expected a nonnegative integer");
    c.seed = seed->get<std::uint64_t>();
  }
  const bool has_eps = o.has("epsilon");
  c.epsilon = o.num("epsilon", 1.0);
  if (!(c.epsilon > 0.0)) fail(o.at("epsilon"), "must be > 0");
  c.threads = static_cast<int>(o.integer("threads", 1));
  if (c.threads < 0) fail(o.at("threads"), "must be >= 0 (0 means all cores)");
  c.verbosity = static_cast<int>(o.integer("verbosity", 0));
  if (const json* out = o.find("output")) c.output = output_from_json(*out, o.at("output"));

  switch (c.command) {
    case Command::kEstimate:
    case Command::kSimulate: {
      c.scenario = scenario_from_json(o.need("scenario"), o.at("scenario"));
      if (c.seed) {
        c.scenario->seed = *c.seed;
      } else if (j.at("scenario").contains("seed")) {
        c.seed = c.scenario->seed;
      }
      if (has_eps) {
        c.scenario->epsilon = c.epsilon;
      } else {
        c.epsilon = c.scenario->epsilon;
      }
      if (c.command == Command::kEstimate) {
        c.data = o.nums("data", std::vector<double>{});
        if (!c.data.empty() && c.data.size() != c.scenario->n) fail(o.at("data"), "length must equal scenario.n");
      } else if (const json* e = o.find("experiment")) {
        c.experiment = experiment_from_json(*e, o.at("experiment"));
      }
      break;
    }
    case Command::kTest:
    case Command::kDistances: {
      c.pair.p = measure_spec_from_json(o.need("p"), o.at("p"));
      c.pair.q = measure_spec_from_json(o.need("q"), o.at("q"));
      if (c.command == Command::kDistances) break;
      c.pair.loss = loss_spec_from_json(o.need("loss"), o.at("loss"));
      if (const json* t = o.find("truth")) c.pair.truth = measure_spec_from_json(*t, o.at("truth"));
      c.pair.n = o.count("n", 0);
      c.pair.replications = o.count("replications", 0);
      c.pair.data = o.nums("data", std::vector<double>{});
      c.pair.devroye_lugosi = o.boolean("devroye_lugosi", false);
      if (c.pair.data.empty() && (!c.pair.truth || c.pair.n == 0)) {
        fail(o.at("data"), "give observations, or truth and n");
      }
      if (c.pair.replications > 0 && (!c.pair.truth || c.pair.n == 0)) {
        fail(o.at("replications"), "the error study needs truth and n");
      }
      break;
    }
    case Command::kCheckAssumptions: {
      c.assumptions.loss = loss_spec_from_json(o.need("loss"), o.at("loss"));
      c.assumptions.space_size = o.count("space_size", 5, 2);
      c.assumptions.spaces = o.count("spaces", 200, 1);
      break;
    }
  }
  o.done();
  return c;
}

RunConfig load_run_config(const std::string& file, std::optional<Command> command) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(file + ": " + e.what());
  }
  return run_config_from_json(j, command, file);
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  if (c.seed) j["seed"] = *c.seed;
  j["epsilon"] = c.epsilon;
  j["threads"] = c.threads;
  j["verbosity"] = c.verbosity;
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}, {"timing", c.output.timing}};
  switch (c.command) {
    case Command::kEstimate:
    case Command::kSimulate:
      if (c.scenario) j["scenario"] = to_json(*c.scenario);
      if (c.command == Command::kEstimate) {
        if (!c.data.empty()) j["data"] = c.data;
      } else {
        json e;
        e["type"] = name_of(experiment_types(), c.experiment.type);
        if (c.experiment.type == ExperimentType::kDeviation) e["xis"] = c.experiment.xis;
        if (c.experiment.type == ExperimentType::kRate) {
          e["ns"] = c.experiment.ns;
          e["grid_exponent"] = c.experiment.grid_exponent;
        }
        j["experiment"] = e;
      }
      break;
    case Command::kTest:
    case Command::kDistances:
      j["p"] = to_json(c.pair.p);
      j["q"] = to_json(c.pair.q);
      if (c.command == Command::kDistances) break;
      j["loss"] = to_json(c.pair.loss);
      if (c.pair.truth) j["truth"] = to_json(*c.pair.truth);
      j["n"] = c.pair.n;
      j["replications"] = c.pair.replications;
      if (!c.pair.data.empty()) j["data"] = c.pair.data;
      j["devroye_lugosi"] = c.pair.devroye_lugosi;
      break;
    case Command::kCheckAssumptions:
      j["loss"] = to_json(c.assumptions.loss);
      j["space_size"] = c.assumptions.space_size;
      j["spaces"] = c.assumptions.spaces;
      break;
  }
  return j;
}

void finalize(RunConfig& c) {
  if (c.scenario) {
    if (c.seed) c.scenario->seed = *c.seed;
    c.scenario->epsilon = c.epsilon;
  }
  if (c.command == Command::kSimulate && !c.seed) throw ConfigError("seed: required for simulate");
  if ((c.command == Command::kEstimate || c.command == Command::kSimulate) && !c.scenario) {
    throw ConfigError("scenario: required key missing");
  }
}

}  // namespace ellest
