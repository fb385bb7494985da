#pragma once

#include <cmath>

#include "fglab/errors.hpp"
#include "fglab/field.hpp"
#include "fglab/params.hpp"

namespace fglab {

/// Physical unknowns of the relaxation system: surface deformation zeta,
/// velocity u, augmented variable eta and augmented velocity w. The depth is
/// derived as h = 1 + zeta.
struct StateU {
  ScalarField zeta, u, eta, w;

  static StateU rest(GridSpec grid) {
    return {ScalarField(grid), ScalarField(grid), ScalarField(grid, 1.0), ScalarField(grid)};
  }

  ScalarField depth() const {
    ScalarField h = zeta;
    for (int j = 0; j < h.size(); ++j) h[j] += 1.0;
    return h;
  }
  double min_depth() const { return 1.0 + zeta.min(); }
  const GridSpec& grid() const { return zeta.grid(); }
};

/// Balanced unknowns: iota = sqrt(mu*lambda) * (eta - h), kappa = sqrt(mu) * w / h.
struct StateV {
  ScalarField zeta, u, iota, kappa;

  double min_depth() const { return 1.0 + zeta.min(); }
  const GridSpec& grid() const { return zeta.grid(); }
};

inline void require_depth_floor(double min_depth, double h_star, double time = 0.0) {
  if (min_depth < h_star) throw CavitationError(min_depth, time);
}

inline StateV to_balanced(const StateU& U, const ParamSet& p) {
  require_depth_floor(U.min_depth(), p.h_star);
  const double root_ml = std::sqrt(p.mu * p.lambda);
  const double root_m = std::sqrt(p.mu);
  ScalarField iota = U.eta;
  ScalarField kappa = U.w;
  for (int j = 0; j < iota.size(); ++j) {
    const double h = 1.0 + U.zeta[j];
    iota[j] = root_ml * (U.eta[j] - h);
    kappa[j] = root_m * U.w[j] / h;
  }
  return {U.zeta, U.u, iota, kappa};
}

inline StateU from_balanced(const StateV& V, const ParamSet& p) {
  require_depth_floor(V.min_depth(), p.h_star);
  const double root_ml = std::sqrt(p.mu * p.lambda);
  const double root_m = std::sqrt(p.mu);
  ScalarField eta = V.iota;
  ScalarField w = V.kappa;
  for (int j = 0; j < eta.size(); ++j) {
    const double h = 1.0 + V.zeta[j];
    eta[j] = h + V.iota[j] / root_ml;
    w[j] = h * V.kappa[j] / root_m;
  }
  return {V.zeta, V.u, eta, w};
}

/// Sum-of-components Sobolev norm for state vectors.
inline double sobolev_norm(const StateU& U, double s) {
  const double a = sobolev_norm(U.zeta, s), b = sobolev_norm(U.u, s),
               c = sobolev_norm(U.eta, s), d = sobolev_norm(U.w, s);
  return std::sqrt(a * a + b * b + c * c + d * d);
}

inline double sobolev_norm(const StateV& V, double s) {
  const double a = sobolev_norm(V.zeta, s), b = sobolev_norm(V.u, s),
               c = sobolev_norm(V.iota, s), d = sobolev_norm(V.kappa, s);
  return std::sqrt(a * a + b * b + c * c + d * d);
}

}  // namespace fglab
