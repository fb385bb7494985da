#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fglab/errors.hpp"
#include "fglab/field.hpp"

namespace fglab {

/// Complex-valued periodic field. Complex unknowns appear only in the model
/// problems of this module.
struct ComplexField {
  GridSpec grid;
  std::vector<std::complex<double>> v;

  explicit ComplexField(GridSpec g) : grid(g), v(g.n_points, 0.0) {}
  ComplexField(GridSpec g, std::vector<std::complex<double>> values)
      : grid(g), v(std::move(values)) {}

  template <typename F>
  static ComplexField sample(GridSpec g, F&& f) {
    ComplexField out(g);
    for (int j = 0; j < g.n_points; ++j) out.v[j] = f(g.node(j));
    return out;
  }

  int size() const { return grid.n_points; }
  std::complex<double>& operator[](int j) { return v[j]; }
  const std::complex<double>& operator[](int j) const { return v[j]; }
};

inline double l2_norm(const ComplexField& f) {
  double acc = 0.0;
  for (const auto& z : f.v) acc += std::norm(z);
  return std::sqrt(f.grid.dx() * acc);
}

inline double linf_norm(const ComplexField& f) {
  double m = 0.0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

/// Signed wavenumber of c2c spectrum index k.
inline double signed_wavenumber(const GridSpec& g, int k) {
  const int ks = (k <= g.n_points / 2) ? k : k - g.n_points;
  return 2.0 * std::numbers::pi * ks / g.length;
}

inline ComplexField spectral_derivative(const ComplexField& f, int order) {
  auto c = detail::cfft(f.v);
  const int n = f.size();
  for (int k = 0; k < n; ++k) {
    const double w = signed_wavenumber(f.grid, k);
    std::complex<double> m = std::pow(std::complex<double>(0.0, w), order);
    if (k == n / 2 && order % 2 == 1) m = 0.0;
    c[k] *= m;
  }
  return {f.grid, detail::icfft(c)};
}

/// Weighted L2 norm with density 1/h; the exact invariant of the combined model.
inline double weighted_l2_norm(const ComplexField& f, const ScalarField& h) {
  double acc = 0.0;
  for (int j = 0; j < f.size(); ++j) acc += std::norm(f.v[j]) / h[j];
  return std::sqrt(f.grid.dx() * acc);
}

enum class ToyModel { transport, oscillator, combined };

/// One of the model problems d_t u = (1/eps) h d_x u (transport),
/// d_t u = (i/eps) h u (oscillator), d_t u = (i/eps) h sqrt(1 - mu d_xx) u (combined).
struct ToySpec {
  ToyModel model = ToyModel::oscillator;
  double epsilon = 0.01;
  double mu = 0.0;  // combined only
  ScalarField h;
  ComplexField u0;

  ToySpec(ToyModel m, double eps, double mu_, ScalarField h_, ComplexField u0_)
      : model(m), epsilon(eps), mu(mu_), h(std::move(h_)), u0(std::move(u0_)) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ToySpec: epsilon must be positive");
    if (h.min() <= 0.0) throw std::invalid_argument("ToySpec: h must be positive");
  }
};

/// u(t, x) = u0(x) exp(i t h(x) / eps). The spatial derivative of this solution
/// grows linearly in time at rate |h'|/eps: the mechanism preparation removes.
inline ComplexField toy_oscillator_exact(const ToySpec& spec, double t) {
  ComplexField out = spec.u0;
  for (int j = 0; j < out.size(); ++j)
    out[j] *= std::exp(std::complex<double>(0.0, t * spec.h[j] / spec.epsilon));
  return out;
}

namespace detail {

/// Trig-interpolant evaluator for off-grid points; keeps only modes above a
/// relative floor so smooth coefficient fields evaluate in O(#modes).
struct RealTrigEval {
  double c0 = 0.0;
  std::vector<std::pair<double, std::complex<double>>> modes;  // (omega, coeff)

  explicit RealTrigEval(const ScalarField& f) {
    auto c = rfft(f.values());
    const int n = f.size();
    c0 = c[0].real();
    double floor = 0.0;
    for (const auto& z : c) floor = std::max(floor, std::abs(z));
    floor *= 1e-15;
    for (int k = 1; k <= n / 2; ++k)
      if (std::abs(c[k]) > floor) modes.emplace_back(f.grid().wavenumber(k), c[k]);
  }
  double operator()(double x) const {
    double acc = c0;
    for (const auto& [w, c] : modes)
      acc += 2.0 * (c * std::exp(std::complex<double>(0.0, w * x))).real();
    return acc;
  }
};

struct ComplexTrigEval {
  std::vector<std::pair<double, std::complex<double>>> modes;

  explicit ComplexTrigEval(const ComplexField& f) {
    auto c = cfft(f.v);
    for (int k = 0; k < f.size(); ++k) modes.emplace_back(signed_wavenumber(f.grid, k), c[k]);
  }
  std::complex<double> operator()(double x) const {
    std::complex<double> acc = 0.0;
    for (const auto& [w, c] : modes) acc += c * std::exp(std::complex<double>(0.0, w * x));
    return acc;
  }
};

// Dormand-Prince 5(4) on the bundle of characteristics dY/ds = f(Y).
template <typename F>
void dp45_integrate(std::vector<double>& y, double t_end, F&& f, double tol) {
  if (t_end == 0.0) return;
  const int n = static_cast<int>(y.size());
  std::vector<std::vector<double>> k(7, std::vector<double>(n));
  std::vector<double> tmp(n), y5(n);

  static constexpr double A[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double B5[7] = {35.0 / 384,      0.0,          500.0 / 1113, 125.0 / 192,
                                   -2187.0 / 6784, 11.0 / 84,    0.0};
  static constexpr double B4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  double t = 0.0;
  double dt = t_end / 100.0;
  int rejections = 0;
  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    f(y, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (int i = 0; i < n; ++i) {
        double acc = y[i];
        for (int q = 0; q < s; ++q) acc += dt * A[s][q] * k[q][i];
        tmp[i] = acc;
      }
      f(tmp, k[s]);
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc5 = y[i], acc4 = y[i];
      for (int s = 0; s < 7; ++s) {
        acc5 += dt * B5[s] * k[s][i];
        acc4 += dt * B4[s] * k[s][i];
      }
      y5[i] = acc5;
      err = std::max(err, std::abs(acc5 - acc4) / (tol + tol * std::abs(acc5)));
    }
    if (err <= 1.0) {
      y = y5;
      t += dt;
      rejections = 0;
    } else if (++rejections > 60) {
      throw SolverError("toy_transport_solve: characteristic ODE tolerance failure", err, 60);
    }
    const double factor = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
    dt *= std::clamp(factor, 0.2, 5.0);
  }
}

}  // namespace detail

/// Solve d_t u = (1/eps) h d_x u by tracing characteristics backwards
/// (dX/ds = +h(X)/eps for time t) and spectrally interpolating u0 there.
inline ComplexField toy_transport_solve(const ToySpec& spec, double t, double tol = 1e-12) {
  const int n = spec.u0.size();
  std::vector<double> y(n);
  for (int j = 0; j < n; ++j) y[j] = spec.u0.grid.node(j);

  const detail::RealTrigEval h_eval(spec.h);
  const double inv_eps = 1.0 / spec.epsilon;
  detail::dp45_integrate(
      y, t,
      [&](const std::vector<double>& pos, std::vector<double>& dydt) {
        for (size_t i = 0; i < pos.size(); ++i) dydt[i] = h_eval(pos[i]) * inv_eps;
      },
      tol);

  const detail::ComplexTrigEval u0_eval(spec.u0);
  ComplexField out(spec.u0.grid);
  for (int j = 0; j < n; ++j) out[j] = u0_eval(y[j]);
  return out;
}

namespace detail {

/// Bessel J_0..J_kmax(z) by Miller's backward recurrence with the
/// J0 + 2 sum J_{2k} = 1 normalization.
inline std::vector<double> bessel_j_table(double z, int kmax) {
  std::vector<double> out(kmax + 1, 0.0);
  if (z == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const int start = kmax + 16 + static_cast<int>(std::ceil(std::sqrt(40.0 * std::max(z, 1.0))));
  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / z) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250)
      for (int q = k - 1; q <= start + 1; ++q) j[q] *= 1e-250;
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  for (int k = 0; k <= kmax; ++k) out[k] = j[k] / norm;
  return out;
}

}  // namespace detail

/// Propagator for d_t u = (i/eps) h sqrt(1 - mu d_xx) u. Works in v = u/sqrt(h),
/// where the generator B = sqrt(h) Lambda sqrt(h) is self-adjoint, and expands
/// exp(i theta B) in Chebyshev polynomials of B (Jacobi-Anger): the recursion
/// alternates pointwise sqrt(h) multiplications with the Fourier multiplier
/// sqrt(1 + mu w^2). Unitary in the 1/h-weighted norm up to the expansion
/// truncation, and exact for constant h.
inline ComplexField toy_combined_solve(const ToySpec& spec, double t, double z_per_step = 50.0) {
  const int n = spec.u0.size();
  const GridSpec g = spec.u0.grid;

  std::vector<double> root_h(n);
  for (int j = 0; j < n; ++j) root_h[j] = std::sqrt(spec.h[j]);
  std::vector<double> mult(n);
  for (int k = 0; k < n; ++k) {
    const double w = signed_wavenumber(g, k);
    mult[k] = std::sqrt(1.0 + spec.mu * w * w);
  }

  auto apply_B = [&](const ComplexField& f) {
    ComplexField x = f;
    for (int j = 0; j < n; ++j) x[j] *= root_h[j];
    auto c = detail::cfft(x.v);
    for (int k = 0; k < n; ++k) c[k] *= mult[k];
    x.v = detail::icfft(c);
    for (int j = 0; j < n; ++j) x[j] *= root_h[j];
    return x;
  };

  const double w_max = g.wavenumber(n / 2);
  const double hi = spec.h.max() * std::sqrt(1.0 + spec.mu * w_max * w_max);
  const double lo = spec.h.min();
  const double center = 0.5 * (hi + lo);
  const double radius = 0.5 * (hi - lo);

  ComplexField v = spec.u0;
  for (int j = 0; j < n; ++j) v[j] /= root_h[j];

  const double theta_total = t / spec.epsilon;
  const long steps =
      radius > 0.0 ? std::max<long>(1, std::lround(std::ceil(std::abs(theta_total) * radius / z_per_step)))
                   : 1;
  const double theta = theta_total / steps;
  const double z = theta * radius;
  const int kmax = static_cast<int>(std::ceil(std::abs(z))) + 40;

  const auto J = detail::bessel_j_table(std::abs(z), kmax);
  const double sgn = (z >= 0.0) ? 1.0 : -1.0;  // J_k(-z) = (-1)^k J_k(z)

  for (long s = 0; s < steps; ++s) {
    // Chebyshev recursion on B~ = (B - center)/radius
    ComplexField t0 = v;
    ComplexField t1 = apply_B(v);
    for (int j = 0; j < n; ++j) t1[j] = (t1[j] - center * v[j]) / radius;

    ComplexField acc(g);
    for (int j = 0; j < n; ++j) acc[j] = J[0] * t0[j];
    std::complex<double> ik(0.0, 1.0);
    for (int k = 1; k <= kmax; ++k) {
      const double jk = J[k] * ((k % 2 == 1) ? sgn : 1.0);
      for (int j = 0; j < n; ++j) acc[j] += 2.0 * ik * jk * t1[j];
      if (k < kmax) {
        ComplexField t2 = apply_B(t1);
        for (int j = 0; j < n; ++j) t2[j] = 2.0 * (t2[j] - center * t1[j]) / radius - t0[j];
        t0 = std::move(t1);
        t1 = std::move(t2);
      }
      ik *= std::complex<double>(0.0, 1.0);
    }
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, theta * center));
    for (int j = 0; j < n; ++j) acc[j] *= phase;
    v = std::move(acc);
  }

  for (int j = 0; j < n; ++j) v[j] *= root_h[j];
  return v;
}

}  // namespace fglab
