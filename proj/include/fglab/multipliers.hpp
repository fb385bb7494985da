#pragma once

#include <cmath>
#include <complex>

#include "fglab/errors.hpp"
#include "fglab/field.hpp"
#include "fglab/state.hpp"

namespace fglab {

// Fourier-multiplier realizations (d = 1) of the skew operator J^mu and the
// projections onto its kernel (regular) and non-kernel (singular) subspaces.
// Per mode with a = sqrt(mu) * w the symbols are exact rationals in a; the
// Nyquist mode uses a = 0, consistent with the cosine convention of
// spectral_derivative, so all projector identities hold exactly there too.

enum class Subspace { regular, singular };

namespace detail {

struct ModeVec {
  std::complex<double> zeta, u, iota, kappa;
};

template <typename F>
inline StateV map_modes(const StateV& V, double mu, F&& per_mode) {
  const int n = V.zeta.size();
  auto cz = rfft(V.zeta.values());
  auto cu = rfft(V.u.values());
  auto ci = rfft(V.iota.values());
  auto ck = rfft(V.kappa.values());
  for (int k = 0; k <= n / 2; ++k) {
    const double w = (k == n / 2) ? 0.0 : V.grid().wavenumber(k);
    const double a = std::sqrt(mu) * w;
    ModeVec m{cz[k], cu[k], ci[k], ck[k]};
    m = per_mode(m, a);
    cz[k] = m.zeta;
    cu[k] = m.u;
    ci[k] = m.iota;
    ck[k] = m.kappa;
  }
  return {{V.grid(), irfft(cz, n)},
          {V.grid(), irfft(cu, n)},
          {V.grid(), irfft(ci, n)},
          {V.grid(), irfft(ck, n)}};
}

}  // namespace detail

/// J^mu f = (0, sqrt(mu) d_x iota, sqrt(mu) d_x u + kappa, -iota). Skew-symmetric in L2.
inline StateV j_apply(const StateV& f, double mu) {
  return detail::map_modes(f, mu, [](detail::ModeVec m, double a) {
    const std::complex<double> ia(0.0, a);
    return detail::ModeVec{0.0, ia * m.iota, ia * m.u + m.kappa, -m.iota};
  });
}

/// Projection onto the kernel (regular) or non-kernel (singular) part of J^mu.
inline StateV projector_apply(const StateV& f, double mu, Subspace which) {
  const bool reg = (which == Subspace::regular);
  return detail::map_modes(f, mu, [reg](detail::ModeVec m, double a) {
    const double den = 1.0 + a * a;
    const std::complex<double> ia(0.0, a);
    detail::ModeVec out;
    if (reg) {
      out.zeta = m.zeta;
      out.u = (m.u + ia * m.kappa) / den;
      out.iota = 0.0;
      out.kappa = (-ia * m.u + a * a * m.kappa) / den;
    } else {
      out.zeta = 0.0;
      out.u = (a * a * m.u - ia * m.kappa) / den;
      out.iota = m.iota;
      out.kappa = (ia * m.u + m.kappa) / den;
    }
    return out;
  });
}

/// Inverse of J^mu on its singular subspace: V = -J^mu (1 - mu Lap)^{-1} U,
/// the unique singular V with J^mu V = U. Requires Pi^r U ~ 0.
inline StateV j_inverse_singular(const StateV& U, double mu) {
  const StateV reg = projector_apply(U, mu, Subspace::regular);
  const double nrm = sobolev_norm(U, 0.0);
  if (sobolev_norm(reg, 0.0) > 1e-10 * nrm)
    throw DomainError("j_inverse_singular: input not in the singular subspace");
  return detail::map_modes(U, mu, [](detail::ModeVec m, double a) {
    const double den = 1.0 + a * a;
    const std::complex<double> ia(0.0, a);
    detail::ModeVec out;
    out.zeta = 0.0;
    out.u = -ia * m.iota / den;
    out.iota = -(ia * m.u + m.kappa) / den;
    out.kappa = m.iota / den;
    return out;
  });
}

/// L2 inner product of two 4-field vectors.
inline double inner_l2(const StateV& a, const StateV& b) {
  return inner_l2(a.zeta, b.zeta) + inner_l2(a.u, b.u) + inner_l2(a.iota, b.iota) +
         inner_l2(a.kappa, b.kappa);
}

inline StateV operator+(const StateV& a, const StateV& b) {
  return {a.zeta + b.zeta, a.u + b.u, a.iota + b.iota, a.kappa + b.kappa};
}
inline StateV operator-(const StateV& a, const StateV& b) {
  return {a.zeta - b.zeta, a.u - b.u, a.iota - b.iota, a.kappa - b.kappa};
}

}  // namespace fglab
