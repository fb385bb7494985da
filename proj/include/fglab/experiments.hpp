#pragma once

#include <sys/utsname.h>

#include <atomic>
#include <optional>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "fglab/config.hpp"
#include "fglab/diagnostics.hpp"
#include "fglab/dynamics.hpp"
#include "fglab/elliptic.hpp"
#include "fglab/linefit.hpp"
#include "fglab/prep.hpp"
#include "fglab/timestepping.hpp"
#include "fglab/toy.hpp"
#include "fglab/version.hpp"

namespace fglab {

struct ResultTable {
  std::string name;                 // file stem; schema version is fglab.<name>.v1
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string schema_version() const { return "fglab." + name + ".v1"; }
};

struct ExperimentResult {
  std::vector<ResultTable> tables;
  int rows_total = 0;
  int rows_failed = 0;
};

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline std::string num6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
void parallel_rows(int count, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Initial surface and velocity from the named family.
inline std::pair<ScalarField, ScalarField> build_initial_data(const GridConfig& grid,
                                                              const InitialDataConfig& data) {
  GridSpec g(grid.n, grid.length);
  const double a = data.amplitude;
  ScalarField zeta0(g), u0(g);
  if (data.family == "sine_wave") {
    const double k = data.wavenumber * 2.0 * std::numbers::pi / g.length;
    zeta0 = ScalarField::sample(g, [&](double x) { return a * std::sin(k * x); });
  } else if (data.family == "velocity_sine") {
    // still surface, sinusoidal velocity: div u0 != 0, so the naive lift
    // w0 = 0 misses the slow manifold at order one
    const double k = data.wavenumber * 2.0 * std::numbers::pi / g.length;
    u0 = ScalarField::sample(g, [&](double x) { return a * std::sin(k * x); });
  } else {  // gaussian_hump: periodized smooth bump centered mid-domain
    const double x0 = 0.5 * g.length;
    const double w2 = 0.25;
    zeta0 = ScalarField::sample(g, [&](double x) {
      const double c = std::cos(2.0 * std::numbers::pi * (x - x0) / g.length);
      return a * std::exp((c - 1.0) / w2);
    });
  }
  return {zeta0, u0};
}

// ---------------------------------------------------------------------------
// convergence in lambda: prepared relaxation runs against the reference system
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  double lambda = 0.0;
  RunStatus status = RunStatus::ok;
  bool solver_error = false;
  double err_h1 = 0.0, err_l2 = 0.0;
  double resid_l2_final = 0.0, resid_l2_sup = 0.0;
  double sup_prep_h1 = 0.0;
  double margin_min = 1.0;
  long fg_steps = 0, gn_steps = 0;
  double fg_sec_med = 0.0, gn_sec_med = 0.0;
  long gn_elliptic_iters = 0;
  bool ok() const { return status == RunStatus::ok && !solver_error; }
};

inline ConvergenceRow convergence_point(const ExperimentConfig& cfg, double lambda) {
  ConvergenceRow row;
  row.lambda = lambda;
  const auto [zeta0, u0] = build_initial_data(cfg.grid, cfg.initial_data);
  ParamSet p(lambda, cfg.params.mu, cfg.params.nu, cfg.params.h_star);
  try {
    const auto prep_data = prepare(zeta0, u0, cfg.prep_order, p);
    const auto fg = integrate_fg(prep_data.U0, p, cfg.policy.to_policy());
    const auto ell0 = EllipticCounters::snapshot();
    const auto gn = integrate_gn({zeta0, u0}, p, cfg.gn_policy.to_policy());
    row.gn_elliptic_iters = EllipticCounters::delta(ell0).iterations;

    row.status = fg.status != RunStatus::ok ? fg.status : gn.status;
    if (row.status != RunStatus::ok) return row;

    const StateU& a = fg.back();
    const StateU& b = gn.back();
    row.err_h1 = sobolev_norm(a.zeta - b.zeta, 1.0) + sobolev_norm(a.u - b.u, 1.0);
    row.err_l2 = sobolev_norm(a.zeta - b.zeta, 0.0) + sobolev_norm(a.u - b.u, 0.0);

    for (int i = 0; i < fg.size(); ++i) {
      const StateU& s = fg.states[i];
      row.margin_min = std::min(row.margin_min, hyperbolicity_margin(to_balanced(s, p), p));
      row.sup_prep_h1 = std::max(row.sup_prep_h1, p.lambda * sobolev_norm(s.eta - s.depth(), 1.0));
      if (2 * i >= fg.size()) {  // skip the initial transient in the residual sup
        const double r = sobolev_norm(consistency_residual_composed(s, p), 0.0);
        row.resid_l2_sup = std::max(row.resid_l2_sup, r);
      }
    }
    row.resid_l2_final = sobolev_norm(consistency_residual_composed(fg.back(), p), 0.0);
    row.fg_steps = fg.total_steps;
    row.gn_steps = gn.total_steps;
    row.fg_sec_med = detail::median(fg.step_seconds);
    row.gn_sec_med = detail::median(gn.step_seconds);
  } catch (const SolverError&) {
    row.solver_error = true;
  } catch (const CavitationError&) {
    row.status = RunStatus::aborted_depth_floor;
  }
  return row;
}

inline ExperimentResult run_convergence_lambda(const ExperimentConfig& cfg, int jobs = 1) {
  std::vector<double> lambdas = cfg.params.lambdas;
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<ConvergenceRow> rows(lambdas.size());
  detail::parallel_rows(static_cast<int>(lambdas.size()), jobs,
                        [&](int i) { rows[i] = convergence_point(cfg, lambdas[i]); });

  const std::string hash = config_hash(cfg.echo);
  ExperimentResult res;
  ResultTable t;
  t.name = "convergence_lambda";
  t.columns = {"schema_version", "manifest_hash", "lambda", "mu", "n", "t_end", "scheme",
               "prep_order", "status", "err_h1", "err_l2", "resid_l2_final", "resid_l2_sup",
               "sup_lambda_eta_minus_h_h1", "margin_min", "fg_steps", "fg_sec_per_step_median",
               "gn_steps", "gn_sec_per_step_median", "gn_elliptic_iters"};
  std::vector<double> fit_x, fit_e, fit_r;
  for (const auto& r : rows) {
    const std::string status = r.solver_error ? "solver_error" : to_string(r.status);
    t.add_row({t.schema_version(), hash, detail::num(r.lambda), detail::num(cfg.params.mu),
               std::to_string(cfg.grid.n), detail::num(cfg.policy.t_end), cfg.policy.scheme,
               std::to_string(cfg.prep_order), status,
               r.ok() ? detail::num(r.err_h1) : "", r.ok() ? detail::num(r.err_l2) : "",
               r.ok() ? detail::num(r.resid_l2_final) : "", r.ok() ? detail::num(r.resid_l2_sup) : "",
               r.ok() ? detail::num(r.sup_prep_h1) : "", r.ok() ? detail::num(r.margin_min) : "",
               std::to_string(r.fg_steps), detail::num6(r.fg_sec_med), std::to_string(r.gn_steps),
               detail::num6(r.gn_sec_med), std::to_string(r.gn_elliptic_iters)});
    ++res.rows_total;
    if (!r.ok()) ++res.rows_failed;
    if (r.ok()) {
      fit_x.push_back(r.lambda);
      fit_e.push_back(r.err_h1);
      fit_r.push_back(r.resid_l2_sup);
    }
  }
  const SlopeFit fe = fit_log_slope(fit_x, fit_e);
  const SlopeFit fr = fit_log_slope(fit_x, fit_r);
  ResultTable f;
  f.name = "convergence_lambda_fit";
  f.columns = {"schema_version", "manifest_hash", "quantity", "slope", "intercept", "points",
               "degenerate"};
  f.add_row({f.schema_version(), hash, "err_h1", detail::num(fe.slope), detail::num(fe.intercept),
             std::to_string(fe.points), fe.degenerate ? "true" : "false"});
  f.add_row({f.schema_version(), hash, "resid_l2_sup", detail::num(fr.slope),
             detail::num(fr.intercept), std::to_string(fr.points), fr.degenerate ? "true" : "false"});
  res.tables = {t, f};
  return res;
}

// ---------------------------------------------------------------------------
// preparedness sweep over lambda x preparation order
// ---------------------------------------------------------------------------

struct PreparednessRow {
  double lambda = 0.0;
  int m = 0;
  RunStatus status = RunStatus::ok;
  bool solver_error = false;
  double sup_h1 = 0.0, sup_l2 = 0.0, final_h1 = 0.0;
  double margin_min = 1.0;
  double triple_monitor = 0.0;
  bool ok() const { return status == RunStatus::ok && !solver_error; }
};

inline PreparednessRow preparedness_point(const ExperimentConfig& cfg, double lambda, int m) {
  PreparednessRow row;
  row.lambda = lambda;
  row.m = m;
  const auto [zeta0, u0] = build_initial_data(cfg.grid, cfg.initial_data);
  ParamSet p(lambda, cfg.params.mu, cfg.params.nu, cfg.params.h_star);
  try {
    const auto prep_data = prepare(zeta0, u0, m, p);
    const auto traj = integrate_fg(prep_data.U0, p, cfg.policy.to_policy());
    row.status = traj.status;
    if (row.status != RunStatus::ok) return row;
    const auto h1 = preparedness_report(traj, p, 1.0);
    const auto l2 = preparedness_report(traj, p, 0.0);
    for (double v : h1) row.sup_h1 = std::max(row.sup_h1, v);
    for (double v : l2) row.sup_l2 = std::max(row.sup_l2, v);
    row.final_h1 = h1.back();
    for (const auto& s : traj.states)
      row.margin_min = std::min(row.margin_min, hyperbolicity_margin(to_balanced(s, p), p));
    if (traj.size() >= 7)
      row.triple_monitor = triple_norm(traj, traj.size() / 2, NormSpec(2, 1, 1.0)).value;
  } catch (const SolverError&) {
    row.solver_error = true;
  } catch (const CavitationError&) {
    row.status = RunStatus::aborted_depth_floor;
  }
  return row;
}

inline ExperimentResult run_preparedness_sweep(const ExperimentConfig& cfg, int jobs = 1) {
  std::vector<double> lambdas = cfg.params.lambdas;
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<int> orders = cfg.prep_orders;
  std::sort(orders.begin(), orders.end());

  std::vector<std::pair<double, int>> points;
  for (double l : lambdas)
    for (int m : orders) points.emplace_back(l, m);
  std::vector<PreparednessRow> rows(points.size());
  detail::parallel_rows(static_cast<int>(points.size()), jobs, [&](int i) {
    rows[i] = preparedness_point(cfg, points[i].first, points[i].second);
  });

  const std::string hash = config_hash(cfg.echo);
  ExperimentResult res;
  ResultTable t;
  t.name = "preparedness_sweep";
  t.columns = {"schema_version", "manifest_hash", "lambda", "mu", "m", "status",
               "sup_lambda_eta_minus_h_h1", "sup_lambda_eta_minus_h_l2",
               "final_lambda_eta_minus_h_h1", "margin_min", "triple_norm_s2_m1"};
  for (const auto& r : rows) {
    const std::string status = r.solver_error ? "solver_error" : to_string(r.status);
    t.add_row({t.schema_version(), hash, detail::num(r.lambda), detail::num(cfg.params.mu),
               std::to_string(r.m), status, r.ok() ? detail::num(r.sup_h1) : "",
               r.ok() ? detail::num(r.sup_l2) : "", r.ok() ? detail::num(r.final_h1) : "",
               r.ok() ? detail::num(r.margin_min) : "", r.ok() ? detail::num(r.triple_monitor) : ""});
    ++res.rows_total;
    if (!r.ok()) ++res.rows_failed;
  }

  ResultTable f;
  f.name = "preparedness_fit";
  f.columns = {"schema_version", "manifest_hash", "m", "slope_h1", "slope_l2", "spread_h1",
               "points", "degenerate"};
  for (int m : orders) {
    std::vector<double> x, yh, yl;
    double lo = 0.0, hi = 0.0;
    for (const auto& r : rows)
      if (r.m == m && r.ok()) {
        x.push_back(r.lambda);
        yh.push_back(r.sup_h1);
        yl.push_back(r.sup_l2);
        lo = lo == 0.0 ? r.sup_h1 : std::min(lo, r.sup_h1);
        hi = std::max(hi, r.sup_h1);
      }
    const SlopeFit fh = fit_log_slope(x, yh);
    const SlopeFit fl = fit_log_slope(x, yl);
    f.add_row({f.schema_version(), hash, std::to_string(m), detail::num(fh.slope),
               detail::num(fl.slope), detail::num(lo > 0 ? hi / lo : 0.0),
               std::to_string(fh.points), fh.degenerate ? "true" : "false"});
  }
  res.tables = {t, f};
  return res;
}

// ---------------------------------------------------------------------------
// cost benchmark: relaxation stepping vs elliptic-inversion stepping
// ---------------------------------------------------------------------------

inline ExperimentResult run_benchmark_cost(const ExperimentConfig& cfg) {
  GridConfig grid = cfg.grid;
  grid.n = cfg.benchmark.n;
  const auto [zeta0, u0] = build_initial_data(grid, cfg.initial_data);
  ParamSet p(cfg.benchmark.lambda, cfg.params.mu, cfg.params.nu, cfg.params.h_star);
  const auto prep_data = prepare(zeta0, u0, 2, p);

  auto timed_run = [&](SystemKind system, long steps, long warmup) {
    StepPolicy policy = cfg.policy.to_policy();
    if (system == SystemKind::gn) policy.scheme = Scheme::rk4_explicit;
    policy.dt_override = 0.0;
    const double dt = system == SystemKind::fg
                          ? select_dt(prep_data.U0, p, policy, SystemKind::fg)
                          : select_dt(prep_data.U0, p, policy, SystemKind::gn);
    policy.dt_override = dt;
    policy.snapshot_interval = dt * (steps + warmup);
    policy.t_end = policy.snapshot_interval;
    const auto ell0 = EllipticCounters::snapshot();
    const Trajectory traj = system == SystemKind::fg
                                ? integrate_fg(prep_data.U0, p, policy)
                                : integrate_gn({zeta0, u0}, p, policy);
    const auto ell = EllipticCounters::delta(ell0);
    std::vector<double> timings(traj.step_seconds.begin() + std::min<size_t>(warmup, traj.step_seconds.size()),
                                traj.step_seconds.end());
    struct Out {
      double dt;
      long steps;
      std::vector<double> timings;
      long ell_solves, ell_iters;
      RunStatus status;
    };
    return Out{dt, traj.total_steps, timings, ell.solves, ell.iterations, traj.status};
  };

  const auto fg = timed_run(SystemKind::fg, cfg.benchmark.steps, cfg.benchmark.warmup_steps);
  const auto gn = timed_run(SystemKind::gn, cfg.benchmark.steps, cfg.benchmark.warmup_steps);

  const std::string hash = config_hash(cfg.echo);
  ExperimentResult res;
  ResultTable t;
  t.name = "benchmark_cost";
  t.columns = {"schema_version", "manifest_hash", "system", "scheme", "n", "lambda", "mu",
               "timed_steps", "dt", "sec_per_step_median", "sec_per_step_mean", "sec_per_step_min",
               "sec_per_sim_time", "elliptic_solves", "elliptic_iterations",
               "elliptic_iters_per_step", "status"};
  auto emit = [&](const char* name, const char* scheme, const auto& r) {
    double mean = 0.0, mn = r.timings.empty() ? 0.0 : r.timings.front();
    for (double v : r.timings) {
      mean += v;
      mn = std::min(mn, v);
    }
    if (!r.timings.empty()) mean /= r.timings.size();
    const double med = detail::median(r.timings);
    t.add_row({t.schema_version(), hash, name, scheme, std::to_string(cfg.benchmark.n),
               detail::num(p.lambda), detail::num(p.mu), std::to_string(r.timings.size()),
               detail::num(r.dt), detail::num6(med), detail::num6(mean), detail::num6(mn),
               detail::num6(r.dt > 0 ? med / r.dt : 0.0), std::to_string(r.ell_solves),
               std::to_string(r.ell_iters),
               detail::num6(r.steps > 0 ? static_cast<double>(r.ell_iters) / r.steps : 0.0),
               to_string(r.status)});
    ++res.rows_total;
    if (r.status != RunStatus::ok) ++res.rows_failed;
  };
  emit("fg", cfg.policy.scheme.c_str(), fg);
  emit("gn", "rk4_explicit", gn);
  res.tables = {t};
  if (fg.ell_solves != 0)
    throw std::logic_error("benchmark invariant violated: relaxation stepping performed elliptic solves");
  return res;
}

// ---------------------------------------------------------------------------
// toy-model demonstrations
// ---------------------------------------------------------------------------

inline ExperimentResult run_toy_demo(const ExperimentConfig& cfg) {
  const std::string hash = config_hash(cfg.echo);
  ExperimentResult res;
  ResultTable t;
  t.name = "toy_demo";
  t.columns = {"schema_version", "manifest_hash", "model", "epsilon", "delta", "mu", "m", "t",
               "quantity", "value"};
  auto add = [&](const std::string& model, double mu, int m, double time, const char* q, double v) {
    t.add_row({t.schema_version(), hash, model, detail::num(cfg.toy.epsilon),
               detail::num(cfg.toy.delta), detail::num(mu), std::to_string(m), detail::num(time),
               q, detail::num(v)});
    ++res.rows_total;
  };

  GridSpec g(cfg.grid.n, cfg.grid.length);
  const double delta = cfg.toy.delta;
  const auto h = ScalarField::sample(
      g, [&](double x) { return 1.0 + delta * std::cos(2.0 * std::numbers::pi * x / g.length); });
  const auto u0 = ComplexField::sample(g, [&](double x) {
    return std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * x / g.length));
  });
  const bool all = cfg.toy.model == "all";

  if (all || cfg.toy.model == "oscillator") {
    ToySpec spec(ToyModel::oscillator, cfg.toy.epsilon, 0.0, h, u0);
    const double T = cfg.toy.t_end;
    const double dt = 0.01 * T;
    const auto uT = toy_oscillator_exact(spec, T);
    const auto uTm = toy_oscillator_exact(spec, T - dt);
    const double slope =
        (l2_norm(spectral_derivative(uT, 1)) - l2_norm(spectral_derivative(uTm, 1))) / dt;
    ScalarField u0r(g);
    for (int j = 0; j < g.n_points; ++j) u0r[j] = std::abs(u0[j]);
    const double analytic = l2_norm(pointwise_mul(u0r, spectral_derivative(h, 1))) / spec.epsilon;
    add("oscillator", 0.0, 1, T, "derivative_growth_slope_measured", slope);
    add("oscillator", 0.0, 1, T, "derivative_growth_slope_analytic", analytic);
    add("oscillator", 0.0, 0, T, "l2_drift", std::abs(l2_norm(uT) - l2_norm(u0)));
  }

  if (all || cfg.toy.model == "transport") {
    ToySpec spec(ToyModel::transport, cfg.toy.epsilon, 0.0, h, u0);
    const double T = std::min(cfg.toy.t_end, 1.0);
    const auto uT = toy_transport_solve(spec, T);
    add("transport", 0.0, 0, T, "linf_ratio", linf_norm(uT) / linf_norm(u0));
  }

  if (all || cfg.toy.model == "combined") {
    for (double mu : cfg.toy.mu_list) {
      const int n_samples = 16;
      const double dt = cfg.toy.t_end / n_samples;
      std::vector<ComplexField> samples{u0};
      samples.reserve(n_samples + 1);
      for (int i = 0; i < n_samples; ++i) {
        // the propagator is autonomous: advance sample to sample
        ToySpec leg(ToyModel::combined, cfg.toy.epsilon, mu, h, samples.back());
        samples.push_back(toy_combined_solve(leg, dt));
      }
      for (int m : cfg.toy.m_list) {
        double sup_ratio = 0.0;
        for (const auto& u : samples) {
          ComplexField d = u;
          for (int q = 0; q < m; ++q) d = spectral_derivative(d, 1);
          sup_ratio = std::max(sup_ratio,
                               l2_norm(d) / (l2_norm(u0) * std::pow(mu, -0.5 * m)));
        }
        add("combined", mu, m, cfg.toy.t_end, "sup_deriv_ratio", sup_ratio);
      }
      add("combined", mu, 0, cfg.toy.t_end,
          "weighted_l2_drift", std::abs(weighted_l2_norm(samples.back(), h) - weighted_l2_norm(u0, h)));
    }
  }

  res.tables = {t};
  return res;
}

// ---------------------------------------------------------------------------
// single run with full diagnostics and field snapshots
// ---------------------------------------------------------------------------

inline ExperimentResult run_single(const ExperimentConfig& cfg,
                                   std::optional<Trajectory>* out_traj = nullptr) {
  const auto [zeta0, u0] = build_initial_data(cfg.grid, cfg.initial_data);
  ParamSet p(cfg.params.lambdas.front(), cfg.params.mu, cfg.params.nu, cfg.params.h_star);

  Trajectory traj = [&] {
    if (cfg.system == "gn") return integrate_gn({zeta0, u0}, p, cfg.gn_policy.to_policy());
    const auto prep_data = prepare(zeta0, u0, cfg.prep_order, p);
    return integrate_fg(prep_data.U0, p, cfg.policy.to_policy());
  }();

  const std::string hash = config_hash(cfg.echo);
  ExperimentResult res;
  ResultTable t;
  t.name = "single_run";
  t.columns = {"schema_version", "manifest_hash", "t", "mass", "l2_zeta", "h1_zeta", "l2_u",
               "min_depth", "margin", "lambda_eta_minus_h_h1", "st_energy", "resid_l2"};
  for (int i = 0; i < traj.size(); ++i) {
    const StateU& s = traj.states[i];
    const StateV v = to_balanced(s, p);
    t.add_row({t.schema_version(), hash, detail::num(traj.times[i]), detail::num(integral(s.zeta)),
               detail::num(sobolev_norm(s.zeta, 0.0)), detail::num(sobolev_norm(s.zeta, 1.0)),
               detail::num(sobolev_norm(s.u, 0.0)), detail::num(s.min_depth()),
               detail::num(hyperbolicity_margin(v, p)),
               detail::num(p.lambda * sobolev_norm(s.eta - s.depth(), 1.0)),
               detail::num(st_energy(v, p)),
               detail::num(sobolev_norm(consistency_residual_composed(s, p), 0.0))});
    ++res.rows_total;
  }
  if (traj.status != RunStatus::ok) ++res.rows_failed;
  res.tables = {t};
  if (out_traj) *out_traj = std::move(traj);
  return res;
}

// ---------------------------------------------------------------------------
// emission: CSV tables, run manifest, binary field snapshots
// ---------------------------------------------------------------------------

inline std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline void write_csv(const ResultTable& t, const std::filesystem::path& dir) {
  std::ofstream out(dir / (t.name + ".csv"));
  for (size_t c = 0; c < t.columns.size(); ++c)
    out << t.columns[c] << (c + 1 < t.columns.size() ? "," : "\n");
  for (const auto& row : t.rows)
    for (size_t c = 0; c < row.size(); ++c) out << row[c] << (c + 1 < row.size() ? "," : "\n");
}

inline void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  utsname uts{};
  uname(&uts);
  nlohmann::json m;
  m["schema"] = "fglab.manifest.v1";
  m["config"] = cfg.echo;
  m["config_hash"] = config_hash(cfg.echo);
  m["code_version"] = kVersion;
  m["platform"] = std::string(uts.sysname) + " " + uts.release + " " + uts.machine;
  m["timestamp"] = iso_timestamp_utc();
  m["seed"] = cfg.seed;
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << "\n";
}

/// Raw little-endian float64 dump with a text sidecar describing the layout.
inline void write_snapshot(const ScalarField& f, const std::string& name, double time,
                           const std::filesystem::path& dir) {
  {
    std::ofstream bin(dir / (name + ".bin"), std::ios::binary);
    bin.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  std::ofstream side(dir / (name + ".txt"));
  side << "dtype: float64\n"
       << "byte_order: little_endian\n"
       << "shape: (" << f.size() << ",)\n"
       << "domain_length: " << detail::num(f.grid().length) << "\n"
       << "time: " << detail::num(time) << "\n"
       << "field: " << name << "\n";
}

inline void emit_results(const ExperimentResult& res, const ExperimentConfig& cfg,
                         const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& t : res.tables) write_csv(t, dir);
  write_manifest(cfg, dir);
}

inline void emit_trajectory_snapshots(const Trajectory& traj, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  auto dump_state = [&](const StateU& s, double time, const std::string& tag) {
    write_snapshot(s.zeta, "zeta_" + tag, time, dir);
    write_snapshot(s.u, "u_" + tag, time, dir);
    write_snapshot(s.eta, "eta_" + tag, time, dir);
    write_snapshot(s.w, "w_" + tag, time, dir);
  };
  if (traj.size() > 0) dump_state(traj.states.front(), traj.times.front(), "initial");
  if (traj.size() > 1) dump_state(traj.states.back(), traj.times.back(), "final");
}

/// Dispatch on the experiment kind; returns the tables plus failure counts.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1,
                                       std::optional<Trajectory>* single_traj = nullptr) {
  switch (cfg.experiment) {
    case ExperimentKind::convergence_lambda: return run_convergence_lambda(cfg, jobs);
    case ExperimentKind::preparedness_sweep: return run_preparedness_sweep(cfg, jobs);
    case ExperimentKind::benchmark_cost: return run_benchmark_cost(cfg);
    case ExperimentKind::toy_demo: return run_toy_demo(cfg);
    default: return run_single(cfg, single_traj);
  }
}

}  // namespace fglab
