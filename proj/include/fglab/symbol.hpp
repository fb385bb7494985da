#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <vector>

#include "fglab/errors.hpp"
#include "fglab/params.hpp"
#include "fglab/state.hpp"

namespace fglab {

using DenseMatrix = Eigen::MatrixXd;

/// Pointwise state + frequency sample for the physical variables (zeta, u, eta, w).
/// Houses alpha = 1 + mu*lambda*eta^2/(3h^3) and beta = (mu*lambda/3h)(1 - 2 eta/h).
struct SymbolPoint {
  int d = 1;  // horizontal dimension, 1 or 2
  double zeta = 0.0;
  std::array<double, 2> u{0.0, 0.0};
  double eta = 1.0;
  double w = 0.0;
  std::array<double, 2> xi{1.0, 0.0};
  double mu = 0.1;
  double lambda = 1.0;

  double h() const { return 1.0 + zeta; }
  double alpha() const {
    const double hh = h();
    return 1.0 + mu * lambda * eta * eta / (3.0 * hh * hh * hh);
  }
  double beta() const {
    const double hh = h();
    return mu * lambda / (3.0 * hh) * (1.0 - 2.0 * eta / hh);
  }
  double u_dot_xi() const { return u[0] * xi[0] + (d == 2 ? u[1] * xi[1] : 0.0); }
  double xi_norm() const { return std::sqrt(xi[0] * xi[0] + (d == 2 ? xi[1] * xi[1] : 0.0)); }
  int size() const { return d + 3; }
};

/// Pointwise balanced state (zeta, u, iota, kappa). Same letters alpha, beta as
/// SymbolPoint but with the balanced-variable coefficients.
struct BalancedSymbolPoint {
  int d = 1;
  double zeta = 0.0;
  std::array<double, 2> u{0.0, 0.0};
  double iota = 0.0;
  double kappa = 0.0;
  std::array<double, 2> xi{1.0, 0.0};
  double mu = 0.1;
  double lambda = 1.0;

  double h() const { return 1.0 + zeta; }
  double alpha() const {
    const double hh = h();
    return 1.0 + iota * iota / (3.0 * hh * hh);
  }
  double beta() const {
    const double hh = h();
    const double lm = lambda * mu;
    return (1.0 - kappa * kappa * hh * hh / lm) / (1.0 + 2.0 * iota / (std::sqrt(lm) * hh));
  }
  int size() const { return d + 3; }
};

/// Quasilinear advection matrix contracted with the frequency, xi_x A_x + xi_y A_y.
/// Ordering (zeta, u[, u_y], eta, w).
inline DenseMatrix assemble_symbol(const SymbolPoint& p) {
  const int m = p.size();
  DenseMatrix M = DenseMatrix::Zero(m, m);
  const double adv = p.u_dot_xi();
  const double hh = p.h();
  const double a = p.alpha();
  const double b = p.beta();
  for (int i = 0; i < m; ++i) M(i, i) = adv;
  for (int i = 0; i < p.d; ++i) {
    M(0, 1 + i) = hh * p.xi[i];
    M(1 + i, 0) = a * p.xi[i];
    M(1 + i, p.d + 1) = b * p.xi[i];
  }
  return M;
}

struct CharacteristicSpeeds {
  double advective;            // u . xi, reported separately
  std::vector<double> thetas;  // 0 (x (d+1)), +-sqrt(alpha h)|xi|
  /// Roots tau of the characteristic equation, tau = -u.xi + theta.
  std::vector<double> taus() const {
    std::vector<double> t(thetas.size());
    for (size_t i = 0; i < thetas.size(); ++i) t[i] = -advective + thetas[i];
    return t;
  }
};

inline CharacteristicSpeeds characteristic_speeds(const SymbolPoint& p) {
  const double ah = p.alpha() * p.h();
  if (ah < 0.0) throw NonHyperbolicError("characteristic_speeds: alpha*h < 0");
  const double c = std::sqrt(ah) * p.xi_norm();
  CharacteristicSpeeds out{p.u_dot_xi(), {}};
  out.thetas.assign(p.d + 1, 0.0);
  out.thetas.push_back(c);
  out.thetas.push_back(-c);
  return out;
}

/// Smallest gamma making the (zeta, eta) block of the symmetrizer positive
/// definite: gamma > beta^2 / alpha.
inline double symmetrizer_gamma_min(const SymbolPoint& p) {
  const double b = p.beta();
  return b * b / p.alpha();
}

/// Friedrichs symmetrizer S with blocks (alpha, h Id_d, beta cross terms, gamma, 1).
/// S * (xi . A) is symmetric for every gamma; gamma controls definiteness only.
inline DenseMatrix symmetrizer_hyp(const SymbolPoint& p, double gamma) {
  const int m = p.size();
  DenseMatrix S = DenseMatrix::Zero(m, m);
  S(0, 0) = p.alpha();
  for (int i = 0; i < p.d; ++i) S(1 + i, 1 + i) = p.h();
  S(p.d + 1, p.d + 1) = gamma;
  S(p.d + 2, p.d + 2) = 1.0;
  S(0, p.d + 1) = S(p.d + 1, 0) = p.beta();
  return S;
}

inline DenseMatrix symmetrizer_hyp(const SymbolPoint& p) {
  return symmetrizer_hyp(p, 2.0 * symmetrizer_gamma_min(p) + 1.0);
}

struct SymmetricForm {
  DenseMatrix St;      // in front of the material derivative
  DenseMatrix Sx_xi;   // xi-contracted spatial part
  Eigen::VectorXd G;   // order-zero source
};

/// Symmetric matricial form of the balanced system at a point. Ordering
/// (zeta, u[, u_y], iota, kappa).
inline SymmetricForm symmetric_form(const BalancedSymbolPoint& p) {
  const int m = p.size();
  const double hh = p.h();
  const double a = p.alpha();
  const double b = p.beta();
  const double root_lm = std::sqrt(p.lambda * p.mu);
  const double root_mu = std::sqrt(p.mu);

  SymmetricForm f;
  f.St = DenseMatrix::Zero(m, m);
  f.St(0, 0) = 3.0 * a * b;
  for (int i = 0; i < p.d; ++i) f.St(1 + i, 1 + i) = 3.0 * hh * b;
  f.St(p.d + 1, p.d + 1) = 1.0 / hh;
  f.St(p.d + 2, p.d + 2) = hh * hh * hh;
  f.St(p.d + 1, p.d + 2) = f.St(p.d + 2, p.d + 1) = -p.kappa * hh * hh / root_lm;

  f.Sx_xi = DenseMatrix::Zero(m, m);
  for (int i = 0; i < p.d; ++i) {
    f.Sx_xi(0, 1 + i) = f.Sx_xi(1 + i, 0) = 3.0 * hh * a * b * p.xi[i];
    const double cross = p.kappa * p.kappa * hh * hh / root_lm * p.xi[i];
    f.Sx_xi(1 + i, p.d + 1) = f.Sx_xi(p.d + 1, 1 + i) = cross;
  }

  f.G = Eigen::VectorXd::Zero(m);
  f.G(p.d + 1) = p.kappa * p.iota / (root_mu * hh);
  f.G(p.d + 2) = -hh * hh * hh * p.kappa * p.kappa / root_mu;
  return f;
}

/// Pointwise distance to the hyperbolicity constraint:
/// delta = 1 - max(h|kappa|, 2|iota|/h) / sqrt(lambda mu).
inline double hyperbolicity_margin_point(double h, double iota, double kappa, double lambda_mu) {
  const double lhs = std::max(h * std::abs(kappa), 2.0 * std::abs(iota) / h);
  return 1.0 - lhs / std::sqrt(lambda_mu);
}

inline double hyperbolicity_margin(const BalancedSymbolPoint& p) {
  return hyperbolicity_margin_point(p.h(), p.iota, p.kappa, p.lambda * p.mu);
}

/// Grid minimum of the pointwise margin; positive means the whole state sits
/// inside the hyperbolicity region with that margin.
inline double hyperbolicity_margin(const StateV& V, const ParamSet& p) {
  double worst = 1.0;
  const double lm = p.lambda_mu();
  for (int j = 0; j < V.zeta.size(); ++j) {
    const double h = 1.0 + V.zeta[j];
    worst = std::min(worst, hyperbolicity_margin_point(h, V.iota[j], V.kappa[j], lm));
  }
  return worst;
}

}  // namespace fglab
