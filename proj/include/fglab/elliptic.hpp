#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <functional>

#include "fglab/errors.hpp"
#include "fglab/field.hpp"

namespace fglab {

/// Per-thread instrumentation for elliptic solves, so concurrent sweep workers
/// measure their own runs. The relaxation solver must never touch these; the
/// benchmark harness asserts exactly that.
struct EllipticCounters {
  std::atomic<long> solves{0};
  std::atomic<long> iterations{0};

  static EllipticCounters& instance() {
    thread_local EllipticCounters c;
    return c;
  }
  struct Snapshot {
    long solves;
    long iterations;
  };
  static Snapshot snapshot() {
    auto& c = instance();
    return {c.solves.load(), c.iterations.load()};
  }
  static Snapshot delta(const Snapshot& since) {
    auto now = snapshot();
    return {now.solves - since.solves, now.iterations - since.iterations};
  }
};

// The elliptic operators are fixed linear collocation operators: coefficient
// fields multiply pointwise, derivatives are spectral, nothing is truncated.

/// t[h] psi = psi - (mu/3) h^3 d_x( h^{-1} d_x psi ).
inline ScalarField t_apply(const ScalarField& h, const ScalarField& psi, double mu,
                           double h_star = 0.0) {
  if (h.min() < h_star) throw CavitationError(h.min());
  ScalarField grad = spectral_derivative(psi, 1);
  for (int j = 0; j < grad.size(); ++j) grad[j] /= h[j];
  ScalarField div = spectral_derivative(grad, 1);
  ScalarField out = psi;
  const double c = mu / 3.0;
  for (int j = 0; j < out.size(); ++j) out[j] -= c * h[j] * h[j] * h[j] * div[j];
  return out;
}

/// T[h] v = v - (mu/(3h)) d_x( h^3 d_x v ), the d = 1 vector operator.
inline ScalarField T_apply(const ScalarField& h, const ScalarField& v, double mu,
                           double h_star = 0.0) {
  if (h.min() < h_star) throw CavitationError(h.min());
  ScalarField grad = spectral_derivative(v, 1);
  for (int j = 0; j < grad.size(); ++j) grad[j] *= h[j] * h[j] * h[j];
  ScalarField div = spectral_derivative(grad, 1);
  ScalarField out = v;
  const double c = mu / 3.0;
  for (int j = 0; j < out.size(); ++j) out[j] -= c * div[j] / h[j];
  return out;
}

namespace detail {

inline ScalarField helmholtz_inverse(const ScalarField& f, double c0, double c1) {
  auto c = rfft(f.values());
  const int n = f.size();
  for (int k = 0; k <= n / 2; ++k) {
    const double w = f.grid().wavenumber(k);
    c[k] /= (c0 + c1 * w * w);
  }
  return {f.grid(), irfft(c, n)};
}

inline Eigen::MatrixXd collocation_matrix(const std::function<ScalarField(const ScalarField&)>& op,
                                          const GridSpec& grid) {
  const int n = grid.n_points;
  Eigen::MatrixXd A(n, n);
  for (int j = 0; j < n; ++j) {
    ScalarField e(grid);
    e[j] = 1.0;
    ScalarField col = op(e);
    for (int i = 0; i < n; ++i) A(i, j) = col[i];
  }
  return A;
}

// PCG on the symmetrized system weight*op(psi) = weight*rhs, where
// weight*op is symmetric positive definite in plain L2. Convergence is
// measured on the original equation. Falls back to a dense collocation solve
// for n <= 512 if CG stalls.
inline ScalarField weighted_pcg_solve(const std::function<ScalarField(const ScalarField&)>& op,
                                      const ScalarField& weight, const ScalarField& rhs,
                                      double precond_c0, double precond_c1, const char* name) {
  auto& counters = EllipticCounters::instance();
  counters.solves.fetch_add(1, std::memory_order_relaxed);

  const int n = rhs.size();
  const int max_iter = 10 * n;
  const double tol = 1e-10;
  const double rhs_norm = l2_norm(rhs);
  if (rhs_norm == 0.0) return ScalarField(rhs.grid());

  auto A = [&](const ScalarField& x) { return pointwise_mul(weight, op(x)); };
  const ScalarField b = pointwise_mul(weight, rhs);

  // residual of the original (unweighted) equation
  auto orig_residual = [&](const ScalarField& r) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = r[j] / weight[j];
      acc += v * v;
    }
    return std::sqrt(r.grid().dx() * acc);
  };

  ScalarField psi = helmholtz_inverse(b, precond_c0, precond_c1);
  ScalarField r = b - A(psi);
  double best = orig_residual(r);
  if (best <= tol * rhs_norm) return psi;

  ScalarField z = helmholtz_inverse(r, precond_c0, precond_c1);
  ScalarField p = z;
  double rz = inner_l2(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    counters.iterations.fetch_add(1, std::memory_order_relaxed);
    const ScalarField Ap = A(p);
    const double pAp = inner_l2(p, Ap);
    if (!(pAp > 0.0)) break;  // lost positivity, bail to fallback
    const double alpha = rz / pAp;
    psi += alpha * p;
    r -= alpha * Ap;
    best = orig_residual(r);
    if (best <= tol * rhs_norm) return psi;
    z = helmholtz_inverse(r, precond_c0, precond_c1);
    const double rz_next = inner_l2(r, z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }

  if (n <= 512) {
    const Eigen::MatrixXd M = collocation_matrix(op, rhs.grid());
    Eigen::VectorXd bb(n);
    for (int j = 0; j < n; ++j) bb(j) = rhs[j];
    Eigen::VectorXd x = M.partialPivLu().solve(bb);
    ScalarField out(rhs.grid());
    for (int j = 0; j < n; ++j) out[j] = x(j);
    return out;
  }
  throw SolverError(std::string(name) + ": CG did not converge", best / rhs_norm, max_iter);
}

}  // namespace detail

/// Solve t[h] psi = rhs. CG runs on the h^{-3}-weighted form, which is
/// symmetric positive definite; preconditioner is the constant-coefficient
/// Helmholtz inverse built from mean coefficients.
inline ScalarField t_solve(const ScalarField& h, const ScalarField& rhs, double mu,
                           double h_star = 0.0) {
  if (h.min() < h_star) throw CavitationError(h.min());
  ScalarField w3(h.grid());
  ScalarField w1(h.grid());
  for (int j = 0; j < h.size(); ++j) {
    w3[j] = 1.0 / (h[j] * h[j] * h[j]);
    w1[j] = 1.0 / h[j];
  }
  return detail::weighted_pcg_solve([&](const ScalarField& x) { return t_apply(h, x, mu); }, w3,
                                    rhs, mean(w3), mu / 3.0 * mean(w1), "t_solve");
}

/// Solve T[h] v = rhs via the h-weighted symmetric form.
inline ScalarField T_solve(const ScalarField& h, const ScalarField& rhs, double mu,
                           double h_star = 0.0) {
  if (h.min() < h_star) throw CavitationError(h.min());
  ScalarField h3(h.grid());
  for (int j = 0; j < h.size(); ++j) h3[j] = h[j] * h[j] * h[j];
  return detail::weighted_pcg_solve([&](const ScalarField& x) { return T_apply(h, x, mu); }, h,
                                    rhs, mean(h), mu / 3.0 * mean(h3), "T_solve");
}

}  // namespace fglab
