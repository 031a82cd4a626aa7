#pragma once

// JSON object reader shared by the config parsers.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ellest/scenario.hpp"

namespace ellest::detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

// Typed access to one JSON object; remembers which keys were read so that
// unknown (misspelt) keys are reported.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& need(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) fail(at(key), "required key missing");
    return *v;
  }

  double num(const std::string& key, std::optional<double> def = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (!def) fail(at(key), "required key missing");
      return *def;
    }
    if (!v->is_number()) fail(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(at(key), "expected a finite number");
    return x;
  }

  long long integer(const std::string& key, std::optional<long long> def = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (!def) fail(at(key), "required key missing");
      return *def;
    }
    if (!v->is_number_integer()) fail(at(key), "expected an integer");
    return v->get<long long>();
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> def = std::nullopt, std::size_t min = 0) {
    const long long v = integer(key, def ? std::optional<long long>(static_cast<long long>(*def)) : std::nullopt);
    if (v < static_cast<long long>(min)) fail(at(key), "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_boolean()) fail(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string str(const std::string& key, std::optional<std::string> def = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (!def) fail(at(key), "required key missing");
      return *def;
    }
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> nums(const std::string& key, std::optional<std::vector<double>> def = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (!def) fail(at(key), "required key missing");
      return *def;
    }
    return numbers(*v, at(key));
  }

  std::vector<std::vector<double>> matrix(const std::string& key,
                                          std::optional<std::vector<std::vector<double>>> def = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (!def) fail(at(key), "required key missing");
      return *def;
    }
    if (!v->is_array()) fail(at(key), "expected an array of arrays");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v->size(); ++i) out.push_back(numbers((*v)[i], at(key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  void done() const {
    for (const auto& [k, v] : j_.items()) {
      (void)v;
      if (!used_.contains(k)) fail(at(k), "unknown key");
    }
  }

  static std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Runs a builder and reports failures at the given path.
template <class F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

}  // namespace ellest::detail
