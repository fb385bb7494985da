#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "fglab/dynamics.hpp"
#include "fglab/params.hpp"
#include "fglab/state.hpp"

namespace fglab {

enum class Scheme { rk4_explicit, strang_split };
enum class SystemKind { fg, gn };

struct StepPolicy {
  Scheme scheme = Scheme::rk4_explicit;
  double cfl = 0.4;              // fraction of dx / max_speed
  double stiff_safety = 0.5;     // multiplier on the h_min / sqrt(lambda) cap (rk4 only)
  double t_end = 1.0;
  double snapshot_interval = 0.05;
  double dt_override = 0.0;      // > 0 forces this dt (testing / convergence studies)
};

enum class RunStatus { ok, aborted_depth_floor, aborted_nonfinite };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::aborted_depth_floor: return "aborted_depth_floor";
    default: return "aborted_nonfinite";
  }
}

/// Time-stamped snapshots with solver metadata. GN runs are stored in the same
/// container with the slow-manifold surrogates eta := h and w := -h u_x, so the
/// diagnostics apply uniformly.
struct Trajectory {
  SystemKind system;
  ParamSet params;
  StepPolicy policy;
  std::vector<double> times;
  std::vector<StateU> states;
  double dt = 0.0;
  long total_steps = 0;
  std::vector<double> step_seconds;
  RunStatus status = RunStatus::ok;
  double abort_time = 0.0;

  int size() const { return static_cast<int>(times.size()); }
  double snapshot_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  const StateU& back() const { return states.back(); }
};

template <typename State, typename Tendency>
State rk4_step(const State& U, double dt, Tendency&& f) {
  const State k1 = f(U);
  const State k2 = f(axpy(U, 0.5 * dt, k1));
  const State k3 = f(axpy(U, 0.5 * dt, k2));
  const State k4 = f(axpy(U, dt, k3));
  State out = axpy(U, dt / 6.0, k1);
  out = axpy(out, dt / 3.0, k2);
  out = axpy(out, dt / 3.0, k3);
  return axpy(out, dt / 6.0, k4);
}

/// Strang step for the relaxation system: exact half-step of the stiff
/// oscillator with frozen depth, RK4 on the remainder, exact half-step again
/// with the updated depth.
inline StateU strang_step(const StateU& U, double dt, const ParamSet& p) {
  StateU s = U;
  relaxation_substep_exact(s.eta, s.w, s.depth(), 0.5 * dt, p.lambda);
  s = rk4_step(s, dt, [&](const StateU& x) { return fg_tendency_nonstiff(x, p); });
  relaxation_substep_exact(s.eta, s.w, s.depth(), 0.5 * dt, p.lambda);
  return s;
}

/// dt selection per the policy: CFL bound from the initial state, and under
/// rk4_explicit additionally the relaxation-frequency cap stiff_safety * h_min /
/// sqrt(lambda). The result is then shrunk so snapshots land exactly.
inline double select_dt(const StateU& U, const ParamSet& p, const StepPolicy& policy,
                        SystemKind system) {
  if (policy.dt_override > 0.0) return policy.dt_override;
  double dt;
  if (system == SystemKind::fg) {
    dt = policy.cfl * U.grid().dx() / max_signal_speed(U, p);
    if (policy.scheme == Scheme::rk4_explicit)
      dt = std::min(dt, policy.stiff_safety * U.min_depth() / std::sqrt(p.lambda));
  } else {
    GnState g{U.zeta, U.u};
    dt = policy.cfl * U.grid().dx() / max_signal_speed(g, p);
  }
  return dt;
}

namespace detail {

inline bool state_finite(const StateU& U) {
  return U.zeta.all_finite() && U.u.all_finite() && U.eta.all_finite() && U.w.all_finite();
}

template <typename State, typename StepFn, typename Store>
Trajectory run_loop(Trajectory traj, State state, const ParamSet& p, StepFn&& do_step,
                    Store&& store, double dt_base) {
  const StepPolicy& policy = traj.policy;
  store(traj, state, 0.0);
  if (policy.t_end <= 0.0) return traj;

  const double snap = policy.snapshot_interval > 0.0 ? policy.snapshot_interval : policy.t_end;
  const long n_snaps = std::max<long>(1, std::lround(std::ceil(policy.t_end / snap - 1e-12)));
  const long per_snap = std::max<long>(1, std::lround(std::ceil(snap / dt_base - 1e-12)));
  const double dt = snap / per_snap;
  traj.dt = dt;

  double t = 0.0;
  for (long s = 1; s <= n_snaps; ++s) {
    for (long i = 0; i < per_snap; ++i) {
      const auto tic = std::chrono::steady_clock::now();
      try {
        state = do_step(state, dt);
      } catch (const CavitationError&) {
        traj.status = RunStatus::aborted_depth_floor;
        traj.abort_time = t;
        store(traj, state, t);  // diagnostic snapshot of the last good state
        return traj;
      }
      const auto toc = std::chrono::steady_clock::now();
      traj.step_seconds.push_back(std::chrono::duration<double>(toc - tic).count());
      ++traj.total_steps;
      t += dt;
    }
    const double t_snap = s * snap;
    if (!store(traj, state, t_snap)) {
      traj.status = RunStatus::aborted_nonfinite;
      traj.abort_time = t_snap;
      return traj;
    }
  }
  return traj;
}

}  // namespace detail

/// Integrate the relaxation system from U0. Snapshots are uniformly spaced
/// (dt divides snapshot_interval exactly); per-step wall clock is recorded for
/// the cost benchmark. Depth-floor violations abort with a diagnostic snapshot.
inline Trajectory integrate_fg(const StateU& U0, const ParamSet& p, const StepPolicy& policy) {
  require_depth_floor(U0.min_depth(), p.h_star);
  Trajectory traj{SystemKind::fg, p, policy, {}, {}};
  const double dt_base = select_dt(U0, p, policy, SystemKind::fg);

  auto do_step = [&](const StateU& s, double dt) {
    return policy.scheme == Scheme::strang_split ? strang_step(s, dt, p)
                                                 : rk4_step(s, dt, [&](const StateU& x) {
                                                     return fg_tendency(x, p);
                                                   });
  };
  auto store = [&](Trajectory& tr, const StateU& s, double t) {
    tr.times.push_back(t);
    tr.states.push_back(s);
    return detail::state_finite(s) && s.min_depth() >= p.h_star;
  };
  return detail::run_loop(std::move(traj), U0, p, do_step, store, dt_base);
}

/// Integrate the Green-Naghdi reference (RK4 only; the stiff splitting does not
/// apply since there is no relaxation source). Snapshots carry eta := h and
/// w := -h u_x.
inline Trajectory integrate_gn(const GnState& S0, const ParamSet& p, const StepPolicy& policy) {
  if (policy.scheme == Scheme::strang_split)
    throw std::invalid_argument("integrate_gn: strang_split applies to the relaxation system only");
  require_depth_floor(S0.min_depth(), p.h_star);
  Trajectory traj{SystemKind::gn, p, policy, {}, {}};
  const StateU probe{S0.zeta, S0.u, ScalarField(S0.grid(), 1.0), ScalarField(S0.grid())};
  const double dt_base = select_dt(probe, p, policy, SystemKind::gn);

  auto do_step = [&](const GnState& s, double dt) {
    return rk4_step(s, dt, [&](const GnState& x) { return gn_tendency(x, p); });
  };
  auto store = [&](Trajectory& tr, const GnState& s, double t) {
    ScalarField h = s.zeta;
    for (int j = 0; j < h.size(); ++j) h[j] += 1.0;
    ScalarField w = -mul_dealias(h, spectral_derivative(s.u, 1));
    tr.times.push_back(t);
    tr.states.push_back(StateU{s.zeta, s.u, h, w});
    return s.zeta.all_finite() && s.u.all_finite() && s.min_depth() >= p.h_star;
  };
  return detail::run_loop(std::move(traj), S0, p, do_step, store, dt_base);
}

}  // namespace fglab
