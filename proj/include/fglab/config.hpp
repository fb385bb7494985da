#pragma once

#include <json.hpp>

#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fglab/timestepping.hpp"

namespace fglab {

/// Raised on malformed configuration; carries the path to the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { convergence_lambda, preparedness_sweep, benchmark_cost, toy_demo, single_run };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::convergence_lambda: return "convergence_lambda";
    case ExperimentKind::preparedness_sweep: return "preparedness_sweep";
    case ExperimentKind::benchmark_cost: return "benchmark_cost";
    case ExperimentKind::toy_demo: return "toy_demo";
    default: return "single_run";
  }
}

struct GridConfig {
  int n = 256;
  double length = 2.0 * std::numbers::pi;
};

struct ParamsConfig {
  double mu = 0.1;
  std::vector<double> lambdas{1e3, 1e4, 1e5};
  double nu = 100.0;
  double h_star = 0.5;
};

struct InitialDataConfig {
  std::string family = "sine_wave";  // or "gaussian_hump"
  double amplitude = 0.1;
  int wavenumber = 1;
};

struct PolicyConfig {
  std::string scheme = "strang_split";
  double cfl = 0.3;
  double stiff_safety = 0.5;
  double t_end = 1.0;
  double snapshot_interval = 0.05;
  double dt_override = 0.0;

  StepPolicy to_policy() const {
    StepPolicy p;
    if (scheme == "rk4_explicit")
      p.scheme = Scheme::rk4_explicit;
    else if (scheme == "strang_split")
      p.scheme = Scheme::strang_split;
    else
      throw ConfigError("policy.scheme: expected rk4_explicit or strang_split, got '" + scheme + "'");
    p.cfl = cfl;
    p.stiff_safety = stiff_safety;
    p.t_end = t_end;
    p.snapshot_interval = snapshot_interval;
    p.dt_override = dt_override;
    return p;
  }
};

struct ToyConfig {
  std::string model = "combined";
  double epsilon = 0.01;
  double delta = 0.25;   // depth modulation 1 + delta cos x
  std::vector<double> mu_list{1.0, 0.1, 0.01};
  std::vector<int> m_list{1, 2};
  double t_end = 4.0;    // 1/delta by default
};

struct BenchmarkConfig {
  int n = 1024;
  int steps = 40;
  int warmup_steps = 3;
  double lambda = 1e4;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::single_run;
  GridConfig grid;
  ParamsConfig params;
  InitialDataConfig initial_data;
  int prep_order = 2;
  std::vector<int> prep_orders{0, 1, 2};
  PolicyConfig policy;
  PolicyConfig gn_policy;  // reference-solver policy; defaults below
  ToyConfig toy;
  BenchmarkConfig benchmark;
  std::string system = "fg";  // single_run only
  std::string output_dir = "out";
  long seed = 0;  // reserved; experiments are deterministic
  nlohmann::json echo;  // canonical config echo for the manifest

  ExperimentConfig() {
    gn_policy.scheme = "rk4_explicit";
    gn_policy.dt_override = 5e-4;
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("unknown key '" + (path.empty() ? it.key() : path + "." + it.key()) + "'");
}

template <typename T>
void read_into(const nlohmann::json& j, const char* key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("type mismatch at '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

// lambda may be a single number or a list
inline void read_lambdas(const nlohmann::json& j, const std::string& path,
                         std::vector<double>& out) {
  if (!j.contains("lambda")) return;
  const auto& v = j.at("lambda");
  if (v.is_number()) {
    out = {v.get<double>()};
  } else if (v.is_array() && !v.empty()) {
    try {
      out = v.get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("type mismatch at '" + path + ".lambda'");
    }
  } else {
    throw ConfigError("'" + path + ".lambda' must be a number or a non-empty list");
  }
}

}  // namespace detail

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::convergence_lambda, ExperimentKind::preparedness_sweep,
                 ExperimentKind::benchmark_cost, ExperimentKind::toy_demo, ExperimentKind::single_run})
    if (s == to_string(k)) return k;
  throw ConfigError("experiment: unknown kind '" + s + "'");
}

/// Strict parse: unknown keys, missing required keys, and type mismatches are
/// rejected with the path to the key.
inline ExperimentConfig parse_config_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  detail::reject_unknown_keys(j, {"experiment", "grid", "params", "initial_data", "prep_order",
                                  "prep_orders", "policy", "gn_policy", "toy", "benchmark",
                                  "system", "output_dir", "seed"},
                              "");
  if (!j.contains("experiment")) throw ConfigError("missing required key 'experiment'");
  if (!j.at("experiment").is_string()) throw ConfigError("type mismatch at 'experiment'");
  cfg.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::reject_unknown_keys(g, {"n", "length"}, "grid");
    detail::read_into(g, "n", "grid", cfg.grid.n);
    detail::read_into(g, "length", "grid", cfg.grid.length);
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    detail::reject_unknown_keys(p, {"mu", "lambda", "nu", "h_star"}, "params");
    detail::read_into(p, "mu", "params", cfg.params.mu);
    detail::read_lambdas(p, "params", cfg.params.lambdas);
    detail::read_into(p, "nu", "params", cfg.params.nu);
    detail::read_into(p, "h_star", "params", cfg.params.h_star);
  }
  if (j.contains("initial_data")) {
    const auto& d = j.at("initial_data");
    detail::reject_unknown_keys(d, {"family", "amplitude", "wavenumber"}, "initial_data");
    detail::read_into(d, "family", "initial_data", cfg.initial_data.family);
    detail::read_into(d, "amplitude", "initial_data", cfg.initial_data.amplitude);
    detail::read_into(d, "wavenumber", "initial_data", cfg.initial_data.wavenumber);
    if (cfg.initial_data.family != "sine_wave" && cfg.initial_data.family != "gaussian_hump" &&
        cfg.initial_data.family != "velocity_sine")
      throw ConfigError("initial_data.family: expected sine_wave, velocity_sine, or gaussian_hump, got '" +
                        cfg.initial_data.family + "'");
  }
  detail::read_into(j, "prep_order", "", cfg.prep_order);
  detail::read_into(j, "prep_orders", "", cfg.prep_orders);
  if (cfg.prep_order < 0 || cfg.prep_order > 2) throw ConfigError("prep_order must be 0, 1, or 2");
  for (int m : cfg.prep_orders)
    if (m < 0 || m > 2) throw ConfigError("prep_orders entries must be 0, 1, or 2");

  auto read_policy = [&](const char* key, PolicyConfig& out) {
    if (!j.contains(key)) return;
    const auto& p = j.at(key);
    detail::reject_unknown_keys(
        p, {"scheme", "cfl", "stiff_safety", "t_end", "snapshot_interval", "dt_override"}, key);
    detail::read_into(p, "scheme", key, out.scheme);
    detail::read_into(p, "cfl", key, out.cfl);
    detail::read_into(p, "stiff_safety", key, out.stiff_safety);
    detail::read_into(p, "t_end", key, out.t_end);
    detail::read_into(p, "snapshot_interval", key, out.snapshot_interval);
    detail::read_into(p, "dt_override", key, out.dt_override);
    out.to_policy();  // validates the scheme name
  };
  read_policy("policy", cfg.policy);
  cfg.gn_policy.t_end = cfg.policy.t_end;
  cfg.gn_policy.snapshot_interval = cfg.policy.snapshot_interval;
  cfg.gn_policy.cfl = cfg.policy.cfl;
  read_policy("gn_policy", cfg.gn_policy);
  if (cfg.gn_policy.scheme != "rk4_explicit")
    throw ConfigError("gn_policy.scheme: the reference solver is rk4_explicit only");

  if (j.contains("toy")) {
    const auto& t = j.at("toy");
    detail::reject_unknown_keys(t, {"model", "epsilon", "delta", "mu_list", "m_list", "t_end"},
                                "toy");
    detail::read_into(t, "model", "toy", cfg.toy.model);
    detail::read_into(t, "epsilon", "toy", cfg.toy.epsilon);
    detail::read_into(t, "delta", "toy", cfg.toy.delta);
    detail::read_into(t, "mu_list", "toy", cfg.toy.mu_list);
    detail::read_into(t, "m_list", "toy", cfg.toy.m_list);
    detail::read_into(t, "t_end", "toy", cfg.toy.t_end);
    if (cfg.toy.model != "transport" && cfg.toy.model != "oscillator" &&
        cfg.toy.model != "combined" && cfg.toy.model != "all")
      throw ConfigError("toy.model: expected transport, oscillator, combined, or all");
  }
  if (j.contains("benchmark")) {
    const auto& b = j.at("benchmark");
    detail::reject_unknown_keys(b, {"n", "steps", "warmup_steps", "lambda"}, "benchmark");
    detail::read_into(b, "n", "benchmark", cfg.benchmark.n);
    detail::read_into(b, "steps", "benchmark", cfg.benchmark.steps);
    detail::read_into(b, "warmup_steps", "benchmark", cfg.benchmark.warmup_steps);
    detail::read_into(b, "lambda", "benchmark", cfg.benchmark.lambda);
  }
  detail::read_into(j, "system", "", cfg.system);
  if (cfg.system != "fg" && cfg.system != "gn") throw ConfigError("system: expected fg or gn");
  detail::read_into(j, "output_dir", "", cfg.output_dir);
  detail::read_into(j, "seed", "", cfg.seed);

  // sanity on numeric ranges
  if (cfg.grid.n < 8 || cfg.grid.n % 2 != 0) throw ConfigError("grid.n must be even and >= 8");
  if (!(cfg.grid.length > 0)) throw ConfigError("grid.length must be positive");
  if (!(cfg.params.mu > 0)) throw ConfigError("params.mu must be positive");
  for (double l : cfg.params.lambdas)
    if (!(l > 0)) throw ConfigError("params.lambda entries must be positive");
  if (cfg.params.lambdas.empty()) throw ConfigError("params.lambda must be non-empty");
  if (std::abs(cfg.initial_data.amplitude) >= 1.0 - cfg.params.h_star)
    throw ConfigError("initial_data.amplitude leaves no room above the depth floor");

  cfg.echo = j;
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  return parse_config_json(j);
}

/// Dotted-path override, e.g. "policy.cfl=0.2" or "params.lambda=[1e3,1e4]".
/// The value is parsed as JSON when possible and as a string otherwise.
inline void apply_override(nlohmann::json& j, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not key=value");
  const std::string key = kv.substr(0, eq);
  const std::string val = kv.substr(eq + 1);
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(val);
  } catch (const nlohmann::json::exception&) {
    parsed = val;
  }
  nlohmann::json* node = &j;
  size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("override '" + kv + "' has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

/// FNV-1a of the canonical (sorted-key) dump; links result rows to configs.
inline std::string config_hash(const nlohmann::json& j) {
  const std::string s = j.dump();
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

}  // namespace fglab
