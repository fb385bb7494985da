/// @file fglab.cpp
/// @brief Experiment runner for the hyperbolic-relaxation shallow-water lab.
///
/// Subcommands mirror the experiment kinds:
///   fglab convergence  --config cfg.json   lambda-sweep of FG-vs-GN error
///   fglab preparedness --config cfg.json   lambda x prep-order sweep
///   fglab benchmark    --config cfg.json   per-step cost FG vs GN
///   fglab toy          --config cfg.json   model-problem demos
///   fglab run          --config cfg.json   one integration + snapshots
///
/// Exit codes: 0 success, 2 config error, 3 numerical abort.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "fglab/experiments.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string output_dir;
  int jobs = 1;
  long seed = 0;
  bool seed_set = false;
  std::vector<std::string> overrides;
};

int run_kind(fglab::ExperimentKind kind, const CliOptions& opt) {
  using namespace fglab;

  ExperimentConfig cfg;
  try {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config file '" + opt.config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    if (!j.contains("experiment")) j["experiment"] = to_string(kind);
    for (const auto& kv : opt.overrides) apply_override(j, kv);
    cfg = parse_config_json(j);
    if (cfg.experiment != kind)
      throw ConfigError(std::string("config is for experiment '") + to_string(cfg.experiment) +
                        "' but the subcommand requested '" + to_string(kind) + "'");
    if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
    if (opt.seed_set) cfg.seed = opt.seed;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    std::optional<Trajectory> traj;
    const ExperimentResult res = run_experiment(cfg, opt.jobs, &traj);
    emit_results(res, cfg, cfg.output_dir);
    if (cfg.experiment == ExperimentKind::single_run && traj)
      emit_trajectory_snapshots(*traj, cfg.output_dir);
    std::printf("%s: %d rows (%d failed) -> %s\n", to_string(cfg.experiment), res.rows_total,
                res.rows_failed, cfg.output_dir.c_str());
    const bool all_failed = res.rows_total > 0 && res.rows_failed >= res.rows_total;
    const bool single_aborted =
        cfg.experiment == ExperimentKind::single_run && traj && traj->status != RunStatus::ok;
    if (single_aborted)
      std::fprintf(stderr, "run aborted: %s at t = %g\n", to_string(traj->status), traj->abort_time);
    return (all_failed || single_aborted) ? 3 : 0;
  } catch (const CavitationError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fglab: Favrie-Gavrilyuk relaxation laboratory for the Green-Naghdi system"};
  app.require_subcommand(1);

  CliOptions opt;
  const std::vector<std::pair<std::string, fglab::ExperimentKind>> kinds = {
      {"convergence", fglab::ExperimentKind::convergence_lambda},
      {"preparedness", fglab::ExperimentKind::preparedness_sweep},
      {"benchmark", fglab::ExperimentKind::benchmark_cost},
      {"toy", fglab::ExperimentKind::toy_demo},
      {"run", fglab::ExperimentKind::single_run},
  };

  fglab::ExperimentKind selected{};
  for (const auto& [name, kind] : kinds) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--output", opt.output_dir, "output directory (overrides config)");
    sub->add_option("--jobs", opt.jobs, "concurrent sweep workers")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "reserved; recorded in the manifest")
        ->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--override", opt.overrides, "config override key=value (repeatable)");
    sub->callback([&selected, kind = kind] { selected = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run_kind(selected, opt);
}
