#pragma once

#include <optional>

#include "fglab/dynamics.hpp"
#include "fglab/elliptic.hpp"
#include "fglab/params.hpp"
#include "fglab/state.hpp"
#include "fglab/timestepping.hpp"

namespace fglab {

/// First corrector, the slow-manifold value of w: c1 = -h0 div(u0).
inline ScalarField compute_c1(const ScalarField& zeta0, const ScalarField& u0,
                              double h_star = 0.0) {
  if (1.0 + zeta0.min() < h_star) throw CavitationError(1.0 + zeta0.min());
  ScalarField h0 = zeta0;
  for (int j = 0; j < h0.size(); ++j) h0[j] += 1.0;
  return -mul_dealias(h0, spectral_derivative(u0, 1));
}

/// Second corrector: the unique solution of
///   t[h0] c2 = h0^3 ( u0 u0'' - (u0')^2 - zeta0'' - (u0 u0')' ).
inline ScalarField compute_c2(const ScalarField& zeta0, const ScalarField& u0, double mu,
                              double h_star = 0.0) {
  if (1.0 + zeta0.min() < h_star) throw CavitationError(1.0 + zeta0.min());
  ScalarField h0 = zeta0;
  for (int j = 0; j < h0.size(); ++j) h0[j] += 1.0;
  const ScalarField ux = spectral_derivative(u0, 1);
  const ScalarField uxx = spectral_derivative(u0, 2);
  const ScalarField zxx = spectral_derivative(zeta0, 2);
  ScalarField g = mul_dealias(u0, uxx) - mul_dealias(ux, ux) - zxx -
                  spectral_derivative(mul_dealias(u0, ux), 1);
  for (int j = 0; j < g.size(); ++j) g[j] *= h0[j] * h0[j] * h0[j];
  return t_solve(h0, dealias(g), mu, h_star);
}

struct PreparedData {
  int order_m;
  StateU U0;
  std::optional<ScalarField> c1;
  std::optional<ScalarField> c2;
};

/// Well-prepared initial data for the augmented unknowns:
///   m = 0: eta0 = h0, w0 = 0          (naive data)
///   m = 1: eta0 = h0, w0 = c1
///   m = 2: eta0 = h0 + c2/lambda, w0 = c1
/// Higher orders require the general corrector recursion, which is not
/// implemented here.
inline PreparedData prepare(const ScalarField& zeta0, const ScalarField& u0, int m,
                            const ParamSet& p) {
  if (m < 0 || m > 2)
    throw NotImplementedError("prepare: only orders m in {0,1,2} are implemented; the general "
                              "corrector recursion is out of scope");
  if (1.0 + zeta0.min() < p.h_star) throw CavitationError(1.0 + zeta0.min());

  ScalarField h0 = zeta0;
  for (int j = 0; j < h0.size(); ++j) h0[j] += 1.0;

  PreparedData out{m, StateU{zeta0, u0, h0, ScalarField(zeta0.grid())}, std::nullopt, std::nullopt};
  if (m >= 1) {
    out.c1 = compute_c1(zeta0, u0, p.h_star);
    out.U0.w = *out.c1;
  }
  if (m >= 2) {
    out.c2 = compute_c2(zeta0, u0, p.mu, p.h_star);
    out.U0.eta = h0 + (1.0 / p.lambda) * (*out.c2);
  }
  return out;
}

/// d_t(eta - h) evaluated through the right-hand side: F_eta - F_zeta.
/// Vanishes identically for m >= 1 data and is O(1/lambda) for m = 2.
inline ScalarField eta_minus_h_dt(const StateU& U, const ParamSet& p) {
  const StateU F = fg_tendency(U, p);
  return F.eta - F.zeta;
}

/// d_t^2(eta - h) by composing the right-hand side twice: the directional
/// derivative of G(U) = w - u eta_x + d_x(h u) along F(U), assembled with the
/// same truncation discipline as the tendency itself.
inline ScalarField eta_minus_h_dt2(const StateU& U, const ParamSet& p) {
  const StateU F = fg_tendency(U, p);
  const ScalarField etax = spectral_derivative(U.eta, 1);
  const ScalarField h = U.depth();
  ScalarField out = F.w - mul_dealias(F.u, etax) - mul_dealias(U.u, spectral_derivative(F.eta, 1));
  out += spectral_derivative(mul_dealias(F.zeta, U.u) + mul_dealias(h, F.u), 1);
  return out;
}

/// Time series of lambda * ||eta - h||_{H^s} along a trajectory; the quantity
/// that stays bounded for prepared data and grows for naive data.
inline std::vector<double> preparedness_report(const Trajectory& traj, const ParamSet& p,
                                               double s = 1.0) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const StateU& U : traj.states) {
    ScalarField q = U.eta - U.depth();
    out.push_back(p.lambda * sobolev_norm(q, s));
  }
  return out;
}

}  // namespace fglab
