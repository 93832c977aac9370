#pragma once

// Flat `key = value` configuration with `#` comments. Unknown or repeated
// keys are errors; every value is validated against the preconditions of
// the module that consumes it.

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "capflow/errors.hpp"
#include "capflow/flow.hpp"

namespace capflow::cli {

enum class InitialKind { Cap, Disk, PerturbedCap };

inline const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Cap: return "cap";
    case InitialKind::Disk: return "disk";
    case InitialKind::PerturbedCap: return "perturbed_cap";
  }
  return "?";
}

struct CliConfig {
  std::string command = "run";
  int n = 3;
  InitialKind initial = InitialKind::Cap;
  double rho = 1.0;
  double flattening = 0.3;
  FlowConfig flow{};  ///< flow.num_nodes is the resolution
  std::string output = "capflow_out";

  // Experiments.
  double horizon = 1e-2;
  std::vector<int> p_list{1, 2, 3};
  std::vector<double> rho_grid{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> flattening_grid{0.0, 0.2, 0.4};
  double decay_area_target = 0.999;
  bool inject_defect = false;

  // Sweeps; an empty list means the scalar setting.
  std::vector<int> sweep_n;
  std::vector<double> sweep_rho;
  std::vector<double> sweep_flattening;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, std::string_view v) {
  const std::string text(v);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  return x;
}

inline long long parse_integer(const std::string& key, std::string_view v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + std::string(v) + "'");
  return x;
}

inline bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(v) + "'");
}

template <class F>
inline void for_each_item(std::string_view v, F&& f) {
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    f(trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

inline std::vector<double> parse_double_list(const std::string& key, std::string_view v) {
  std::vector<double> out;
  for_each_item(v, [&](std::string_view item) { out.push_back(parse_double(key, item)); });
  return out;
}

inline std::vector<int> parse_int_list(const std::string& key, std::string_view v) {
  std::vector<int> out;
  for_each_item(v, [&](std::string_view item) {
    const long long x = parse_integer(key, item);
    if (x < -1000000 || x > 1000000) throw ConfigError(key + ": value out of range");
    out.push_back(static_cast<int>(x));
  });
  return out;
}

inline void require(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok) throw ConfigError(key + ": must satisfy " + constraint);
}

inline double positive(const std::string& key, std::string_view v) {
  const double x = parse_double(key, v);
  require(x > 0.0, key, "> 0");
  return x;
}

inline double unit_fraction(const std::string& key, std::string_view v) {
  const double x = parse_double(key, v);
  require(x > 0.0 && x <= 1.0, key, "0 < " + key + " <= 1");
  return x;
}

inline int int_at_least(const std::string& key, std::string_view v, long long lo) {
  const long long x = parse_integer(key, v);
  require(x >= lo && x <= 1000000000, key, key + " >= " + std::to_string(lo));
  return static_cast<int>(x);
}

inline double flattening_value(const std::string& key, double x) {
  require(x >= 0.0 && x < 1.0, key, "0 <= flattening < 1");
  return x;
}

inline int dimension_value(const std::string& key, long long x) {
  require(x >= 2 && x <= 64, key, "n >= 2 (and n <= 64)");
  return static_cast<int>(x);
}

struct KeySpec {
  const char* name;
  const char* help;
  std::function<void(CliConfig&, const std::string&, std::string_view)> set;
};

inline const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs{
      {"n", "hypersurface dimension, n >= 2 (default 3)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         c.n = dimension_value(k, parse_integer(k, v));
       }},
      {"mode", "imcf | mcf (default imcf)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         if (v == "imcf") c.flow.mode = FlowMode::IMCF;
         else if (v == "mcf") c.flow.mode = FlowMode::MCF;
         else throw ConfigError(k + ": expected imcf or mcf, got '" + std::string(v) + "'");
       }},
      {"initial", "cap | disk | perturbed_cap (default cap)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         if (v == "cap") c.initial = InitialKind::Cap;
         else if (v == "disk") c.initial = InitialKind::Disk;
         else if (v == "perturbed_cap") c.initial = InitialKind::PerturbedCap;
         else throw ConfigError(k + ": expected cap, disk or perturbed_cap, got '" + std::string(v) + "'");
       }},
      {"rho", "cap sphere radius, > 0 (default 1)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.rho = positive(k, v); }},
      {"flattening", "perturbed-cap flat fraction in [0, 1) (default 0.3)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         c.flattening = flattening_value(k, parse_double(k, v));
       }},
      {"resolution", "number of profile nodes, >= 16 (default 128)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         c.flow.num_nodes = static_cast<std::size_t>(int_at_least(k, v, 16));
       }},
      {"dt_init", "first time step, > 0 (default 1e-4)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.flow.dt_init = positive(k, v); }},
      {"dt_max", "largest time step, > 0 (default 1e-3)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.flow.dt_max = positive(k, v); }},
      {"cfl", "stability factor in (0, 1) (default 0.2)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         const double x = parse_double(k, v);
         require(x > 0.0 && x < 1.0, k, "0 < cfl < 1");
         c.flow.cfl = x;
       }},
      {"min_H", "IMCF mean-curvature floor, > 0 (default 1e-3)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.flow.min_H = positive(k, v); }},
      {"max_time", "flow horizon, > 0 (default 10)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.flow.max_time = positive(k, v); }},
      {"resample_every", "steps between remeshing, >= 1 (default 20)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         c.flow.resample_every = int_at_least(k, v, 1);
       }},
      {"record_every", "steps between records, >= 1 (default 100)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         c.flow.record_every = int_at_least(k, v, 1);
       }},
      {"record_interval", "also record at every multiple of this time, >= 0; 0 disables (default 0)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         const double x = parse_double(k, v);
         require(x >= 0.0, k, ">= 0");
         c.flow.record_interval = x;
       }},
      {"area_target", "IMCF stops at this fraction of omega_n, in (0, 1] (default 0.99)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.flow.area_target = unit_fraction(k, v); }},
      {"snapshot_every", "records between profile snapshots, >= 0; 0 keeps first and last (default 0)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         c.flow.snapshot_every = int_at_least(k, v, 0);
       }},
      {"output", "output directory (default capflow_out; -o overrides)",
       [](CliConfig& c, const std::string&, std::string_view v) { c.output = std::string(v); }},
      {"horizon", "smoothing experiment horizon, > 0 (default 1e-2)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.horizon = positive(k, v); }},
      {"p_list", "decay experiment exponents, subset of 1,2,3 (default 1,2,3)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         auto ps = parse_int_list(k, v);
         for (int p : ps) require(p >= 1 && p <= 3, k, "entries in {1, 2, 3}");
         c.p_list = std::move(ps);
       }},
      {"rho_grid", "inequality sweep radii, each > 0 (default 0.25,0.5,1,2,4,8)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         auto xs = parse_double_list(k, v);
         for (double x : xs) require(x > 0.0, k, "entries > 0");
         c.rho_grid = std::move(xs);
       }},
      {"flattening_grid", "inequality sweep flattenings, each in [0, 1) (default 0,0.2,0.4)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         auto xs = parse_double_list(k, v);
         for (double x : xs) flattening_value(k, x);
         c.flattening_grid = std::move(xs);
       }},
      {"decay_area_target", "area fraction for the decay experiment, in (0, 1] (default 0.999)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.decay_area_target = unit_fraction(k, v); }},
      {"inject_defect", "corrupt verifier data with its counterexample (default false)",
       [](CliConfig& c, const std::string& k, std::string_view v) { c.inject_defect = parse_bool(k, v); }},
      {"sweep_n", "sweep dimensions, each >= 2 (default: n)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         auto ns = parse_int_list(k, v);
         for (int x : ns) dimension_value(k, x);
         c.sweep_n = std::move(ns);
       }},
      {"sweep_rho", "sweep radii, each > 0 (default: rho)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         auto xs = parse_double_list(k, v);
         for (double x : xs) require(x > 0.0, k, "entries > 0");
         c.sweep_rho = std::move(xs);
       }},
      {"sweep_flattening", "sweep flattenings, each in [0, 1) (default: flattening)",
       [](CliConfig& c, const std::string& k, std::string_view v) {
         auto xs = parse_double_list(k, v);
         for (double x : xs) flattening_value(k, x);
         c.sweep_flattening = std::move(xs);
       }},
  };
  return specs;
}

}  // namespace detail

/// Key reference for --help.
inline std::string config_reference() {
  std::string out = "Config keys (flat `key = value`, `#` starts a comment):\n";
  for (const auto& s : detail::key_specs()) {
    std::string name = s.name;
    name.resize(std::max<std::size_t>(name.size(), 18), ' ');
    out += "  " + name + " " + s.help + "\n";
  }
  return out;
}

/// Total: returns a validated config or throws ConfigError whose message
/// starts with the offending line number.
inline CliConfig parse_config(std::string_view text) {
  CliConfig config;
  std::map<std::string, int> seen;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    const auto& specs = detail::key_specs();
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const auto& s) { return key == s.name; });
    if (it == specs.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (const auto prev = seen.find(key); prev != seen.end())
      throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                        std::to_string(prev->second) + ")");
    seen.emplace(key, lineno);
    if (value.empty()) throw ConfigError(where + key + ": missing value");
    try {
      it->set(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

}  // namespace capflow::cli
