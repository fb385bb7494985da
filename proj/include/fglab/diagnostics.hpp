#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "fglab/multipliers.hpp"
#include "fglab/state.hpp"
#include "fglab/symbol.hpp"
#include "fglab/timestepping.hpp"

namespace fglab {

namespace detail {

/// Fornberg weights: coefficients of the m-th derivative at point z from
/// samples at nodes x. Classic recursion, arbitrary node spacing.
inline std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

}  // namespace detail

inline StateU scale(const StateU& U, double a) {
  return {a * U.zeta, a * U.u, a * U.eta, a * U.w};
}
inline StateV scale(const StateV& V, double a) {
  return {a * V.zeta, a * V.u, a * V.iota, a * V.kappa};
}
inline StateV axpy(const StateV& V, double a, const StateV& T) {
  return {V.zeta + a * T.zeta, V.u + a * T.u, V.iota + a * T.iota, V.kappa + a * T.kappa};
}

/// j-th time derivative of a uniformly sampled state series at snapshot i,
/// from a 7-point window (centered where possible, shifted near the ends).
template <typename S>
S series_derivative(const std::vector<S>& series, double dt, int j, int i, bool* centered = nullptr) {
  constexpr int W = 7;
  const int n = static_cast<int>(series.size());
  if (n < W) throw DomainError("series_derivative: need at least 7 snapshots");
  int start = std::min(std::max(i - W / 2, 0), n - W);
  if (centered) *centered = (start == i - W / 2);
  std::vector<double> nodes(W);
  for (int k = 0; k < W; ++k) nodes[k] = static_cast<double>(start + k);
  const auto w = detail::fd_weights(static_cast<double>(i), nodes, j);
  const double inv = std::pow(dt, -j);
  S out = scale(series[start], w[0] * inv);
  for (int k = 1; k < W; ++k) out = axpy(out, w[k] * inv, series[start + k]);
  return out;
}

/// Precomputed time derivatives of a trajectory up to order j_max <= 3.
/// Endpoint snapshots use one-sided stencils and are flagged via centered[].
struct TimeDerivatives {
  int j_max;
  double dt;
  std::vector<std::vector<StateU>> deriv;  // deriv[j-1][i]
  std::vector<bool> centered;

  const StateU& at(int j, int i) const { return deriv[j - 1][i]; }
};

inline TimeDerivatives time_derivatives(const Trajectory& traj, int j_max) {
  if (j_max < 1 || j_max > 3)
    throw std::invalid_argument("time_derivatives: j_max must be in {1,2,3}");
  const int n = traj.size();
  if (n < 7) throw DomainError("time_derivatives: need at least 7 snapshots");
  const double dt = traj.snapshot_dt();
  for (int i = 1; i < n; ++i)
    if (std::abs(traj.times[i] - traj.times[i - 1] - dt) > 1e-9 * std::max(dt, 1.0))
      throw DomainError("time_derivatives: snapshot spacing not uniform");

  TimeDerivatives out{j_max, dt, {}, std::vector<bool>(n, false)};
  out.deriv.resize(j_max);
  for (int j = 1; j <= j_max; ++j) {
    out.deriv[j - 1].reserve(n);
    for (int i = 0; i < n; ++i) {
      bool c = false;
      out.deriv[j - 1].push_back(series_derivative(traj.states, dt, j, i, &c));
      if (j == 1) out.centered[i] = c;
    }
  }
  return out;
}

/// Parameters of the lambda-weighted space-time norm.
struct NormSpec {
  int s = 2;
  int m = 1;
  double lambda_tilde = 1.0;

  NormSpec(int s_, int m_, double lt) : s(s_), m(m_), lambda_tilde(lt) {
    if (m < 1 || m > s) throw std::invalid_argument("NormSpec: need 1 <= m <= s");
    if (!(lambda_tilde > 0.0)) throw std::invalid_argument("NormSpec: lambda_tilde must be positive");
  }
};

struct TripleNormReport {
  double value = 0.0;
  std::vector<double> term_by_j;  // squared, weighted contributions
  int truncated_at = 0;           // highest j actually summed (<= 3 by construction)
};

/// || V ||_{s,m,lambda~}: sum of H^{s-j} norms of time derivatives with weights
/// lambda~^{m-j} for j > m, truncated at j <= 3 (higher time differences would
/// be FD-noise dominated; the truncation is reported).
inline TripleNormReport triple_norm(const Trajectory& traj, int t_index, const NormSpec& spec) {
  const int j_cap = std::min(spec.s, 3);
  std::vector<StateV> series;
  series.reserve(traj.states.size());
  for (const auto& U : traj.states) series.push_back(to_balanced(U, traj.params));

  TripleNormReport rep;
  rep.truncated_at = j_cap;
  double acc = 0.0;
  for (int j = 0; j <= j_cap; ++j) {
    StateV vj = (j == 0) ? series[t_index]
                         : series_derivative(series, traj.snapshot_dt(), j, t_index);
    const double nj = sobolev_norm(vj, static_cast<double>(spec.s - j));
    const double weight = (j <= spec.m) ? 1.0 : std::pow(spec.lambda_tilde, spec.m - j);
    rep.term_by_j.push_back(weight * nj * nj);
    acc += rep.term_by_j.back();
  }
  rep.value = std::sqrt(acc);
  return rep;
}

/// Quadratic energy <S_t(V) V, V> integrated over the torus.
inline double st_energy(const StateV& V, const ParamSet& p) {
  const double root_lm = std::sqrt(p.lambda_mu());
  double acc = 0.0;
  for (int j = 0; j < V.zeta.size(); ++j) {
    BalancedSymbolPoint q;
    q.d = 1;
    q.zeta = V.zeta[j];
    q.iota = V.iota[j];
    q.kappa = V.kappa[j];
    q.mu = p.mu;
    q.lambda = p.lambda;
    const double h = q.h();
    const double a = q.alpha();
    const double b = q.beta();
    acc += 3.0 * a * b * V.zeta[j] * V.zeta[j] + 3.0 * h * b * V.u[j] * V.u[j] +
           V.iota[j] * V.iota[j] / h + h * h * h * V.kappa[j] * V.kappa[j] -
           2.0 * q.kappa * h * h / root_lm * V.iota[j] * V.kappa[j];
  }
  return acc * V.grid().dx();
}

// --- consistency residual r = -h (eta - h) eta_ddot - h^2 (eta_ddot - h_ddot) ---

/// Composed route: both double material derivatives expressed through the
/// relaxation system itself, so a single snapshot suffices.
///   eta_ddot = -(lambda/h^2)(eta - h)
///   h_ddot   = 2 h u_x^2 - h d_x(u_dot),  u_dot = -zeta_x + (lambda mu/3h) d_x(eta(eta-h)/h)
inline ScalarField consistency_residual_composed(const StateU& U, const ParamSet& p) {
  const ScalarField h = U.depth();
  const ScalarField ux = spectral_derivative(U.u, 1);
  const ScalarField zx = spectral_derivative(U.zeta, 1);

  ScalarField q = U.eta;
  for (int j = 0; j < q.size(); ++j) q[j] = U.eta[j] * (U.eta[j] - h[j]) / h[j];
  const ScalarField qx = spectral_derivative(q, 1);

  ScalarField udot(U.grid());
  const double c = p.lambda * p.mu / 3.0;
  for (int j = 0; j < udot.size(); ++j) udot[j] = -zx[j] + c * qx[j] / h[j];
  const ScalarField udot_x = spectral_derivative(udot, 1);

  ScalarField r(U.grid());
  for (int j = 0; j < r.size(); ++j) {
    const double eta_dd = -p.lambda / (h[j] * h[j]) * (U.eta[j] - h[j]);
    const double h_dd = 2.0 * h[j] * ux[j] * ux[j] - h[j] * udot_x[j];
    r[j] = -h[j] * (U.eta[j] - h[j]) * eta_dd - h[j] * h[j] * (eta_dd - h_dd);
  }
  return r;
}

namespace detail {
/// f_ddot = d_t^2 f + (d_t u) f_x + 2 u (d_t f)_x + u u_x f_x + u^2 f_xx,
/// the expansion of the iterated material derivative.
inline ScalarField double_material(const ScalarField& f, const ScalarField& ft,
                                   const ScalarField& ftt, const ScalarField& u,
                                   const ScalarField& ut) {
  const ScalarField fx = spectral_derivative(f, 1);
  const ScalarField fxx = spectral_derivative(f, 2);
  const ScalarField ftx = spectral_derivative(ft, 1);
  const ScalarField ux = spectral_derivative(u, 1);
  ScalarField out = ftt;
  for (int j = 0; j < out.size(); ++j)
    out[j] += ut[j] * fx[j] + 2.0 * u[j] * ftx[j] + u[j] * ux[j] * fx[j] + u[j] * u[j] * fxx[j];
  return out;
}
}  // namespace detail

/// Finite-difference route: time derivatives from the snapshot table, material
/// corrections assembled spectrally. Independent of the composed route.
inline ScalarField consistency_residual_fd(const Trajectory& traj, const TimeDerivatives& table,
                                           int i) {
  const StateU& U = traj.states[i];
  const StateU& Ut = table.at(1, i);
  const StateU& Utt = table.at(2, i);
  const ScalarField h = U.depth();

  const ScalarField eta_dd = detail::double_material(U.eta, Ut.eta, Utt.eta, U.u, Ut.u);
  const ScalarField h_dd = detail::double_material(h, Ut.zeta, Utt.zeta, U.u, Ut.u);

  ScalarField r(U.grid());
  for (int j = 0; j < r.size(); ++j)
    r[j] = -h[j] * (U.eta[j] - h[j]) * eta_dd[j] - h[j] * h[j] * (eta_dd[j] - h_dd[j]);
  return r;
}

}  // namespace fglab
