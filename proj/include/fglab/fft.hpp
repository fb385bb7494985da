#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace fglab::detail {

// FFTW plan creation is not thread-safe; execution on private buffers is.
// Plans and their buffers live in thread_local caches so concurrent sweep
// workers never contend after warm-up.
inline std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct RealPlanSet {
  int n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  RealPlanSet() = default;
  explicit RealPlanSet(int n_) : n(n_) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
  }
  RealPlanSet(const RealPlanSet&) = delete;
  RealPlanSet& operator=(const RealPlanSet&) = delete;
  RealPlanSet(RealPlanSet&& o) noexcept { *this = std::move(o); }
  RealPlanSet& operator=(RealPlanSet&& o) noexcept {
    std::swap(n, o.n);
    std::swap(real, o.real);
    std::swap(cplx, o.cplx);
    std::swap(fwd, o.fwd);
    std::swap(inv, o.inv);
    return *this;
  }
  ~RealPlanSet() {
    if (fwd || inv) {
      std::lock_guard<std::mutex> lock(plan_mutex());
      if (fwd) fftw_destroy_plan(fwd);
      if (inv) fftw_destroy_plan(inv);
    }
    if (real) fftw_free(real);
    if (cplx) fftw_free(cplx);
  }
};

struct ComplexPlanSet {
  int n = 0;
  fftw_complex* a = nullptr;
  fftw_complex* b = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  ComplexPlanSet() = default;
  explicit ComplexPlanSet(int n_) : n(n_) {
    a = fftw_alloc_complex(n);
    b = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ComplexPlanSet(const ComplexPlanSet&) = delete;
  ComplexPlanSet& operator=(const ComplexPlanSet&) = delete;
  ComplexPlanSet(ComplexPlanSet&& o) noexcept { *this = std::move(o); }
  ComplexPlanSet& operator=(ComplexPlanSet&& o) noexcept {
    std::swap(n, o.n);
    std::swap(a, o.a);
    std::swap(b, o.b);
    std::swap(fwd, o.fwd);
    std::swap(inv, o.inv);
    return *this;
  }
  ~ComplexPlanSet() {
    if (fwd || inv) {
      std::lock_guard<std::mutex> lock(plan_mutex());
      if (fwd) fftw_destroy_plan(fwd);
      if (inv) fftw_destroy_plan(inv);
    }
    if (a) fftw_free(a);
    if (b) fftw_free(b);
  }
};

inline RealPlanSet& real_plans(int n) {
  thread_local std::map<int, RealPlanSet> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, RealPlanSet(n)).first;
  return it->second;
}

inline ComplexPlanSet& complex_plans(int n) {
  thread_local std::map<int, ComplexPlanSet> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, ComplexPlanSet(n)).first;
  return it->second;
}

// Coefficients of the trigonometric interpolant: c_k = (1/n) sum_j f_j e^{-2pi i jk/n},
// k = 0..n/2 (conjugate-symmetric half).
inline std::vector<std::complex<double>> rfft(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  auto& p = real_plans(n);
  for (int i = 0; i < n; ++i) p.real[i] = f[i];
  fftw_execute(p.fwd);
  std::vector<std::complex<double>> c(n / 2 + 1);
  const double scale = 1.0 / n;
  for (int k = 0; k <= n / 2; ++k) c[k] = {p.cplx[k][0] * scale, p.cplx[k][1] * scale};
  return c;
}

inline std::vector<double> irfft(const std::vector<std::complex<double>>& c, int n) {
  auto& p = real_plans(n);
  for (int k = 0; k <= n / 2; ++k) {
    p.cplx[k][0] = c[k].real();
    p.cplx[k][1] = c[k].imag();
  }
  fftw_execute(p.inv);
  return std::vector<double>(p.real, p.real + n);
}

inline std::vector<std::complex<double>> cfft(const std::vector<std::complex<double>>& f) {
  const int n = static_cast<int>(f.size());
  auto& p = complex_plans(n);
  for (int i = 0; i < n; ++i) {
    p.a[i][0] = f[i].real();
    p.a[i][1] = f[i].imag();
  }
  fftw_execute(p.fwd);
  std::vector<std::complex<double>> c(n);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) c[i] = {p.b[i][0] * scale, p.b[i][1] * scale};
  return c;
}

inline std::vector<std::complex<double>> icfft(const std::vector<std::complex<double>>& c) {
  const int n = static_cast<int>(c.size());
  auto& p = complex_plans(n);
  for (int i = 0; i < n; ++i) {
    p.a[i][0] = c[i].real();
    p.a[i][1] = c[i].imag();
  }
  fftw_execute(p.inv);
  std::vector<std::complex<double>> f(n);
  for (int i = 0; i < n; ++i) f[i] = {p.b[i][0], p.b[i][1]};
  return f;
}

}  // namespace fglab::detail
