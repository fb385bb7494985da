#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "fglab/errors.hpp"
#include "fglab/fft.hpp"

namespace fglab {

/// Equispaced periodic grid on a torus of dimensionless length `length`.
struct GridSpec {
  double length;
  int n_points;

  GridSpec(int n, double len = 2.0 * std::numbers::pi) : length(len), n_points(n) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("GridSpec: n_points must be even and >= 8");
    if (!(len > 0.0)) throw std::invalid_argument("GridSpec: domain_length must be positive");
  }

  double dx() const { return length / n_points; }
  /// Physical wavenumber of Fourier index k (half-spectrum index, 0..n/2).
  double wavenumber(int k) const { return 2.0 * std::numbers::pi * k / length; }
  double node(int j) const { return j * dx(); }
  int max_index() const { return n_points / 2; }

  bool operator==(const GridSpec& o) const { return length == o.length && n_points == o.n_points; }
};

/// Real samples of one unknown on a periodic grid. Value semantics throughout;
/// all spectral operations act on the trigonometric interpolant.
class ScalarField {
 public:
  ScalarField(GridSpec grid, std::vector<double> values) : grid_(grid), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != grid_.n_points)
      throw std::invalid_argument("ScalarField: values length mismatch");
  }
  explicit ScalarField(GridSpec grid, double fill = 0.0) : grid_(grid), v_(grid.n_points, fill) {}

  static ScalarField sample(GridSpec grid, const std::function<double(double)>& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.n_points; ++j) out.v_[j] = f(grid.node(j));
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  int size() const { return grid_.n_points; }
  double operator[](int j) const { return v_[j]; }
  double& operator[](int j) { return v_[j]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  bool all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
  }
  double min() const { return *std::min_element(v_.begin(), v_.end()); }
  double max() const { return *std::max_element(v_.begin(), v_.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  ScalarField& operator+=(const ScalarField& o) {
    for (int j = 0; j < size(); ++j) v_[j] += o.v_[j];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    for (int j = 0; j < size(); ++j) v_[j] -= o.v_[j];
    return *this;
  }
  ScalarField& operator*=(double a) {
    for (double& x : v_) x *= a;
    return *this;
  }

 private:
  GridSpec grid_;
  std::vector<double> v_;
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double a, ScalarField f) { return f *= a; }
inline ScalarField operator*(ScalarField f, double a) { return f *= a; }
inline ScalarField operator-(ScalarField f) { return f *= -1.0; }

/// Pointwise product, no truncation. Use mul_dealias for quadratic terms in tendencies.
inline ScalarField pointwise_mul(const ScalarField& a, const ScalarField& b) {
  ScalarField out = a;
  for (int j = 0; j < out.size(); ++j) out[j] *= b[j];
  return out;
}

/// Pointwise quotient. Quotients are a documented, controlled aliasing source:
/// they are never truncated.
inline ScalarField pointwise_div(const ScalarField& a, const ScalarField& b) {
  ScalarField out = a;
  for (int j = 0; j < out.size(); ++j) out[j] /= b[j];
  return out;
}

inline ScalarField apply_pointwise(const ScalarField& a, const std::function<double(double)>& f) {
  ScalarField out = a;
  for (int j = 0; j < out.size(); ++j) out[j] = f(a[j]);
  return out;
}

/// Exact derivative of the trigonometric interpolant (cosine convention at the
/// Nyquist mode: odd derivatives vanish there, even ones keep -w^2 factors).
inline ScalarField spectral_derivative(const ScalarField& f, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
  if (!f.all_finite()) throw InvalidFieldError("spectral_derivative: field has non-finite values");
  auto c = detail::rfft(f.values());
  const int n = f.size();
  for (int k = 0; k <= n / 2; ++k) {
    const double w = f.grid().wavenumber(k);
    if (order == 1) {
      c[k] *= std::complex<double>(0.0, w);
      if (k == n / 2) c[k] = 0.0;
    } else {
      c[k] *= -w * w;
    }
  }
  return {f.grid(), detail::irfft(c, n)};
}

/// 2/3-rule truncation: zero all modes with index above n/3.
inline ScalarField dealias(const ScalarField& f) {
  auto c = detail::rfft(f.values());
  const int n = f.size();
  const int cut = n / 3;
  for (int k = cut + 1; k <= n / 2; ++k) c[k] = 0.0;
  return {f.grid(), detail::irfft(c, n)};
}

/// Pointwise product followed by the 2/3-rule truncation.
inline ScalarField mul_dealias(const ScalarField& a, const ScalarField& b) {
  return dealias(pointwise_mul(a, b));
}

/// || (1 - d_xx)^{s/2} f ||_{L2} with the continuum normalization on the torus:
/// ||f||^2 = L * sum_k (1 + w_k^2)^s |c_k|^2 over signed modes, so values are
/// grid-resolution independent for resolved fields.
inline double sobolev_norm(const ScalarField& f, double s) {
  const auto c = detail::rfft(f.values());
  const int n = f.size();
  double acc = 0.0;
  for (int k = 0; k <= n / 2; ++k) {
    const double w = f.grid().wavenumber(k);
    const double weight = std::pow(1.0 + w * w, s);
    const double mult = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    acc += mult * weight * std::norm(c[k]);
  }
  return std::sqrt(f.grid().length * acc);
}

/// Quadrature L2 norm, sqrt(dx * sum v^2). Agrees with sobolev_norm(f, 0) by Parseval.
inline double l2_norm(const ScalarField& f) {
  double acc = 0.0;
  for (int j = 0; j < f.size(); ++j) acc += f[j] * f[j];
  return std::sqrt(f.grid().dx() * acc);
}

inline double inner_l2(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  for (int j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return a.grid().dx() * acc;
}

inline double mean(const ScalarField& f) {
  double acc = 0.0;
  for (int j = 0; j < f.size(); ++j) acc += f[j];
  return acc / f.size();
}

/// Integral over the torus (trapezoid == spectral on a periodic grid).
inline double integral(const ScalarField& f) { return mean(f) * f.grid().length; }

}  // namespace fglab
