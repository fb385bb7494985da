#pragma once

#include <cmath>

#include "fglab/elliptic.hpp"
#include "fglab/field.hpp"
#include "fglab/params.hpp"
#include "fglab/state.hpp"
#include "fglab/symbol.hpp"

namespace fglab {

/// Reference Green-Naghdi state: surface deformation and velocity only.
struct GnState {
  ScalarField zeta, u;
  double min_depth() const { return 1.0 + zeta.min(); }
  const GridSpec& grid() const { return zeta.grid(); }
};

inline StateU axpy(const StateU& U, double a, const StateU& T) {
  StateU out = U;
  for (int j = 0; j < out.zeta.size(); ++j) {
    out.zeta[j] += a * T.zeta[j];
    out.u[j] += a * T.u[j];
    out.eta[j] += a * T.eta[j];
    out.w[j] += a * T.w[j];
  }
  return out;
}

inline GnState axpy(const GnState& U, double a, const GnState& T) {
  GnState out = U;
  for (int j = 0; j < out.zeta.size(); ++j) {
    out.zeta[j] += a * T.zeta[j];
    out.u[j] += a * T.u[j];
  }
  return out;
}

namespace detail {
/// d_x of the truncated pointwise product, fused into one spectral pass.
inline ScalarField ddx_mul_dealias(const ScalarField& a, const ScalarField& b) {
  ScalarField prod = pointwise_mul(a, b);
  auto c = rfft(prod.values());
  const int n = prod.size();
  const int cut = n / 3;
  for (int k = 0; k <= n / 2; ++k) {
    if (k > cut) {
      c[k] = 0.0;
    } else {
      c[k] *= std::complex<double>(0.0, prod.grid().wavenumber(k));
      if (k == n / 2) c[k] = 0.0;
    }
  }
  return {prod.grid(), irfft(c, n)};
}
}  // namespace detail

/// Right-hand side of the relaxation system in the physical variables:
///   zeta_t = -d_x(h u)
///   u_t    = -(u u_x + zeta_x - (lambda mu / 3h) d_x( eta (eta - h)/h ))
///   eta_t  = -u eta_x + w
///   w_t    = -u w_x - (lambda / h^2)(eta - h)
/// Quadratic products are 2/3-truncated; quotients stay pointwise.
inline StateU fg_tendency(const StateU& U, const ParamSet& p) {
  require_depth_floor(U.min_depth(), p.h_star);
  const ScalarField h = U.depth();
  const ScalarField ux = spectral_derivative(U.u, 1);
  const ScalarField zx = spectral_derivative(U.zeta, 1);

  StateU F{-detail::ddx_mul_dealias(h, U.u), ScalarField(U.grid()), ScalarField(U.grid()),
           ScalarField(U.grid())};

  ScalarField q = U.eta;  // eta (eta - h) / h, pointwise
  for (int j = 0; j < q.size(); ++j) q[j] = U.eta[j] * (U.eta[j] - h[j]) / h[j];
  const ScalarField qx = spectral_derivative(q, 1);
  const ScalarField uux = mul_dealias(U.u, ux);
  const double c = p.lambda * p.mu / 3.0;
  for (int j = 0; j < h.size(); ++j)
    F.u[j] = -(uux[j] + zx[j] - c * qx[j] / h[j]);

  const ScalarField etax = spectral_derivative(U.eta, 1);
  const ScalarField ueta = mul_dealias(U.u, etax);
  const ScalarField wx = spectral_derivative(U.w, 1);
  const ScalarField uwx = mul_dealias(U.u, wx);
  for (int j = 0; j < h.size(); ++j) {
    F.eta[j] = -ueta[j] + U.w[j];
    F.w[j] = -uwx[j] - p.lambda / (h[j] * h[j]) * (U.eta[j] - h[j]);
  }
  return F;
}

/// fg_tendency with the (eta, w) relaxation sources removed; this is the
/// non-stiff flow integrated by RK4 inside the Strang splitting.
inline StateU fg_tendency_nonstiff(const StateU& U, const ParamSet& p) {
  require_depth_floor(U.min_depth(), p.h_star);
  const ScalarField h = U.depth();
  const ScalarField ux = spectral_derivative(U.u, 1);
  const ScalarField zx = spectral_derivative(U.zeta, 1);

  StateU F{-detail::ddx_mul_dealias(h, U.u), ScalarField(U.grid()), ScalarField(U.grid()),
           ScalarField(U.grid())};

  ScalarField q = U.eta;
  for (int j = 0; j < q.size(); ++j) q[j] = U.eta[j] * (U.eta[j] - h[j]) / h[j];
  const ScalarField qx = spectral_derivative(q, 1);
  const ScalarField uux = mul_dealias(U.u, ux);
  const double c = p.lambda * p.mu / 3.0;
  for (int j = 0; j < h.size(); ++j)
    F.u[j] = -(uux[j] + zx[j] - c * qx[j] / h[j]);

  const ScalarField ueta = mul_dealias(U.u, spectral_derivative(U.eta, 1));
  const ScalarField uwx = mul_dealias(U.u, spectral_derivative(U.w, 1));
  for (int j = 0; j < h.size(); ++j) {
    F.eta[j] = -ueta[j];
    F.w[j] = -uwx[j];
  }
  return F;
}

/// Green-Naghdi right-hand side with the dispersive term eliminated through
/// the elliptic inversion:
///   T[h] u_t = -zeta_x - u u_x + mu Q[h, u],
///   Q = (1/3h) d_x( h^3 (u u_xx - u_x^2) ),
/// obtained by substituting h_dot = -h u_x into h_ddot and moving the second
/// time derivative into the operator.
inline GnState gn_tendency(const GnState& S, const ParamSet& p) {
  require_depth_floor(S.min_depth(), p.h_star);
  const ScalarField h = [&] {
    ScalarField out = S.zeta;
    for (int j = 0; j < out.size(); ++j) out[j] += 1.0;
    return out;
  }();
  const ScalarField ux = spectral_derivative(S.u, 1);
  const ScalarField uxx = spectral_derivative(S.u, 2);
  const ScalarField zx = spectral_derivative(S.zeta, 1);

  ScalarField g = mul_dealias(S.u, uxx) - mul_dealias(ux, ux);
  for (int j = 0; j < g.size(); ++j) g[j] *= h[j] * h[j] * h[j];
  const ScalarField gx = spectral_derivative(dealias(g), 1);

  ScalarField rhs_u(S.grid());
  const ScalarField uux = mul_dealias(S.u, ux);
  for (int j = 0; j < rhs_u.size(); ++j)
    rhs_u[j] = -zx[j] - uux[j] + p.mu * gx[j] / (3.0 * h[j]);

  return {-detail::ddx_mul_dealias(h, S.u), T_solve(h, rhs_u, p.mu, p.h_star)};
}

/// Fastest characteristic speed on the grid, |u| + sqrt(alpha h); this is what
/// the advective CFL condition sees.
inline double max_signal_speed(const StateU& U, const ParamSet& p) {
  double m = 0.0;
  for (int j = 0; j < U.zeta.size(); ++j) {
    const double h = 1.0 + U.zeta[j];
    const double alpha = 1.0 + p.mu * p.lambda * U.eta[j] * U.eta[j] / (3.0 * h * h * h);
    m = std::max(m, std::abs(U.u[j]) + std::sqrt(alpha * h));
  }
  return m;
}

/// GN phase speeds are bounded by the hydrostatic sqrt(h).
inline double max_signal_speed(const GnState& S, const ParamSet&) {
  double m = 0.0;
  for (int j = 0; j < S.zeta.size(); ++j)
    m = std::max(m, std::abs(S.u[j]) + std::sqrt(1.0 + S.zeta[j]));
  return m;
}

/// Exact solve of the frozen-coefficient relaxation subsystem
///   d_t(eta - h) = w,  d_t w = -(lambda/h^2)(eta - h)
/// over one substep: a pointwise rotation at frequency omega = sqrt(lambda)/h.
inline void relaxation_substep_exact(ScalarField& eta, ScalarField& w, const ScalarField& h,
                                     double dt, double lambda) {
  const double root_l = std::sqrt(lambda);
  for (int j = 0; j < eta.size(); ++j) {
    const double omega = root_l / h[j];
    const double q0 = eta[j] - h[j];
    const double w0 = w[j];
    const double cs = std::cos(omega * dt);
    const double sn = std::sin(omega * dt);
    eta[j] = h[j] + q0 * cs + w0 / omega * sn;
    w[j] = -omega * q0 * sn + w0 * cs;
  }
}

}  // namespace fglab
