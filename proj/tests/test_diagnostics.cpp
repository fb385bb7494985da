/// @file test_diagnostics.cpp
/// @brief Time-derivative estimation, the weighted space-time norms, and the
/// consistency residual, checked against analytic signals and a linear-mode
/// eigendecomposition oracle.

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>

#include "fglab/diagnostics.hpp"
#include "fglab/dynamics.hpp"
#include "fglab/prep.hpp"

using namespace fglab;

namespace {

Trajectory synthetic_trajectory(GridSpec g, const ParamSet& p, int n_snaps, double dt,
                                const std::function<StateU(double)>& at) {
  Trajectory traj{SystemKind::fg, p, StepPolicy{}, {}, {}};
  for (int i = 0; i < n_snaps; ++i) {
    traj.times.push_back(i * dt);
    traj.states.push_back(at(i * dt));
  }
  return traj;
}

}  // namespace

TEST_CASE("fornberg weights reproduce the classic stencils") {
  const std::vector<double> nodes{-2, -1, 0, 1, 2};
  auto w1 = fglab::detail::fd_weights(0.0, nodes, 1);
  const std::vector<double> ref1{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(w1[i] == Catch::Approx(ref1[i]).margin(1e-14));

  auto w2 = fglab::detail::fd_weights(0.0, nodes, 2);
  const std::vector<double> ref2{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(w2[i] == Catch::Approx(ref2[i]).margin(1e-14));
}

TEST_CASE("time derivatives of analytic signals") {
  GridSpec g(16);
  ParamSet p(10.0, 0.1);

  SECTION("constant trajectory has zero derivatives") {
    auto traj = synthetic_trajectory(g, p, 9, 0.1, [&](double) { return StateU::rest(g); });
    auto table = time_derivatives(traj, 3);
    for (int j = 1; j <= 3; ++j)
      for (int i = 0; i < traj.size(); ++i) CHECK(table.at(j, i).eta.max_abs() < 1e-10);
  }

  SECTION("sin(omega t) signal") {
    const double omega = 2.0, dt = 0.05;
    auto traj = synthetic_trajectory(g, p, 13, dt, [&](double t) {
      StateU s = StateU::rest(g);
      for (int j = 0; j < g.n_points; ++j) s.zeta[j] = std::sin(omega * t) * std::cos(g.node(j));
      return s;
    });
    auto table = time_derivatives(traj, 2);
    for (int i : {3, 6, 9}) {
      const double t = traj.times[i];
      for (int j = 0; j < g.n_points; ++j) {
        const double c = std::cos(g.node(j));
        CHECK(table.at(1, i).zeta[j] ==
              Catch::Approx(omega * std::cos(omega * t) * c).margin(1e-6));
        CHECK(table.at(2, i).zeta[j] ==
              Catch::Approx(-omega * omega * std::sin(omega * t) * c).margin(1e-4));
      }
    }
    CHECK_FALSE(table.centered[0]);  // one-sided endpoints flagged
    CHECK(table.centered[6]);
  }

  SECTION("relaxation oscillator satisfies d_t^2(eta - h) = -lambda (eta - h)") {
    const double lambda = 16.0, dt = 0.02;  // omega = 4, h = 1
    ScalarField h(g, 1.0);
    auto traj = synthetic_trajectory(g, p, 13, dt, [&](double t) {
      StateU s = StateU::rest(g);
      ScalarField eta = ScalarField::sample(g, [](double x) { return 1.0 + 0.01 * std::cos(x); });
      ScalarField w(g);
      relaxation_substep_exact(eta, w, h, t, lambda);
      s.eta = eta;
      s.w = w;
      return s;
    });
    auto table = time_derivatives(traj, 2);
    for (int i : {4, 6, 8}) {
      const auto& U = traj.states[i];
      const auto& Utt = table.at(2, i);
      for (int j = 0; j < g.n_points; ++j)
        CHECK(Utt.eta[j] == Catch::Approx(-lambda * (U.eta[j] - 1.0)).margin(2e-5));
    }
  }

  SECTION("domain guards") {
    auto traj = synthetic_trajectory(g, p, 5, 0.1, [&](double) { return StateU::rest(g); });
    CHECK_THROWS_AS(time_derivatives(traj, 1), DomainError);
    auto traj2 = synthetic_trajectory(g, p, 9, 0.1, [&](double) { return StateU::rest(g); });
    traj2.times[4] += 0.03;
    CHECK_THROWS_AS(time_derivatives(traj2, 1), DomainError);
    CHECK_THROWS_AS(time_derivatives(traj, 4), std::invalid_argument);
  }
}

namespace {

/// Exact solution of the linearized relaxation system at a single mode k:
/// d/dt (z, u, e, w) = L (z, u, e, w) with e the perturbation of eta.
struct LinearModeOracle {
  Eigen::Matrix4cd L;
  Eigen::Vector4cd y0;
  int k;
  double mu, lambda;

  LinearModeOracle(int k_, double lambda_, double mu_, const Eigen::Vector4cd& init)
      : k(k_), mu(mu_), lambda(lambda_) {
    const std::complex<double> ik(0.0, static_cast<double>(k_));
    L.setZero();
    L(0, 1) = -ik;
    L(1, 0) = -ik - lambda_ * mu_ / 3.0 * ik;
    L(1, 2) = lambda_ * mu_ / 3.0 * ik;
    L(2, 3) = 1.0;
    L(3, 0) = lambda_;
    L(3, 2) = -lambda_;
    y0 = init;
  }

  /// j-th time derivative of the mode amplitudes at time t.
  Eigen::Vector4cd derivative(double t, int j) const {
    const Eigen::Matrix4cd expLt = (L * t).exp();
    Eigen::Vector4cd y = expLt * y0;
    for (int q = 0; q < j; ++q) y = L * y;
    return y;
  }

  StateU state(GridSpec g, double t, double amp) const {
    const Eigen::Vector4cd y = derivative(t, 0);
    StateU s = StateU::rest(g);
    for (int j = 0; j < g.n_points; ++j) {
      const std::complex<double> ph = std::exp(std::complex<double>(0.0, k * g.node(j)));
      s.zeta[j] = amp * 2.0 * (y(0) * ph).real();
      s.u[j] = amp * 2.0 * (y(1) * ph).real();
      s.eta[j] = 1.0 + amp * 2.0 * (y(2) * ph).real();
      s.w[j] = amp * 2.0 * (y(3) * ph).real();
    }
    return s;
  }
};

}  // namespace

TEST_CASE("triple norm") {
  GridSpec g(32);
  ParamSet p(10.0, 0.3);

  SECTION("rest trajectory gives zero") {
    auto traj = synthetic_trajectory(g, p, 9, 0.05, [&](double) { return StateU::rest(g); });
    auto rep = triple_norm(traj, 4, NormSpec(3, 1, 2.0));
    CHECK(rep.value < 1e-12);
  }

  SECTION("j-terms of a single linear mode match the eigen oracle to 1%") {
    const int k = 2;
    const double amp = 1e-6;
    Eigen::Vector4cd init;
    init << 0.5, 0.25, 0.1, 0.3;  // generic mix of branches
    LinearModeOracle oracle(k, p.lambda, p.mu, init);

    const double dt = 0.02;
    auto traj = synthetic_trajectory(g, p, 13, dt,
                                     [&](double t) { return oracle.state(g, t, amp); });
    const int s = 3, m = 1;
    const double lt = 2.0;
    auto rep = triple_norm(traj, 6, NormSpec(s, m, lt));
    REQUIRE(rep.term_by_j.size() == 4u);

    const double t = traj.times[6];
    const double root_ml = std::sqrt(p.mu * p.lambda);
    for (int j = 0; j <= 3; ++j) {
      const Eigen::Vector4cd yj = oracle.derivative(t, j);
      // balanced components: iota = sqrt(mu lambda)(e - z), kappa = sqrt(mu) w
      const std::complex<double> vz = yj(0), vu = yj(1);
      const std::complex<double> vi = root_ml * (yj(2) - yj(0));
      const std::complex<double> vk = std::sqrt(p.mu) * yj(3);
      const double sob = std::pow(1.0 + k * k, static_cast<double>(s - j));
      const double field2 = 2.0 * g.length *
                            (std::norm(vz) + std::norm(vu) + std::norm(vi) + std::norm(vk));
      const double weight = (j <= m) ? 1.0 : std::pow(lt, m - j);
      const double expected = weight * sob * field2 * amp * amp;
      CHECK(rep.term_by_j[j] == Catch::Approx(expected).epsilon(0.01));
    }
  }

  SECTION("lambda~ weighting directions") {
    const int k = 1;
    Eigen::Vector4cd init;
    init << 0.3, 0.2, 0.4, 0.1;
    LinearModeOracle oracle(k, p.lambda, p.mu, init);
    auto traj = synthetic_trajectory(g, p, 13, 0.02,
                                     [&](double t) { return oracle.state(g, t, 1e-4); });
    // m = s and lambda~ = 1: plain truncated sum of squares
    auto plain = triple_norm(traj, 6, NormSpec(3, 3, 1.0));
    double acc = 0.0;
    for (double term : plain.term_by_j) acc += term;
    CHECK(plain.value == Catch::Approx(std::sqrt(acc)));

    // weights lambda~^{m-j} with j > m are decreasing in lambda~
    auto lo = triple_norm(traj, 6, NormSpec(3, 1, 1.0));
    auto hi = triple_norm(traj, 6, NormSpec(3, 1, 8.0));
    CHECK(hi.value <= lo.value * (1.0 + 1e-12));
  }
}

TEST_CASE("consistency residual") {
  GridSpec g(64);

  SECTION("rest trajectory gives identically zero") {
    ParamSet p(25.0, 0.2);
    auto traj = synthetic_trajectory(g, p, 9, 0.05, [&](double) { return StateU::rest(g); });
    CHECK(consistency_residual_composed(traj.states[4], p).max_abs() == 0.0);
    auto table = time_derivatives(traj, 2);
    CHECK(consistency_residual_fd(traj, table, 4).max_abs() < 1e-12);
  }

  SECTION("eta == h surrogate trajectories sit below the noise floor") {
    ParamSet p(25.0, 0.2);
    GnState S0{ScalarField::sample(g, [](double x) { return 0.08 * std::cos(x); }),
               ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); })};
    StepPolicy policy;
    policy.t_end = 0.12;
    policy.snapshot_interval = 0.01;
    auto traj = integrate_gn(S0, p, policy);
    REQUIRE(traj.status == RunStatus::ok);
    auto table = time_derivatives(traj, 2);
    // eta := h makes both terms vanish up to finite-difference noise
    CHECK(sobolev_norm(consistency_residual_fd(traj, table, 6), 0.0) < 1e-7);
  }

  SECTION("composed and finite-difference routes agree on a real run") {
    ParamSet p(200.0, 0.1);
    auto d = prepare(ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); }),
                     ScalarField(g), 2, p);
    StepPolicy policy;
    policy.t_end = 0.4;
    policy.snapshot_interval = 0.004;  // resolve the sqrt(lambda) oscillation
    policy.cfl = 0.3;
    auto traj = integrate_fg(d.U0, p, policy);
    REQUIRE(traj.status == RunStatus::ok);
    auto table = time_derivatives(traj, 2);
    const int i = traj.size() / 2;
    const ScalarField r_c = consistency_residual_composed(traj.states[i], p);
    const ScalarField r_f = consistency_residual_fd(traj, table, i);
    CHECK(sobolev_norm(r_f - r_c, 0.0) < 0.02 * sobolev_norm(r_c, 0.0));
  }

  SECTION("projection split of the L2 norm along a trajectory") {
    ParamSet p(30.0, 0.1);
    auto d = prepare(ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); }),
                     ScalarField(g), 2, p);
    StepPolicy policy;
    policy.t_end = 0.5;
    policy.snapshot_interval = 0.1;
    auto traj = integrate_fg(d.U0, p, policy);
    for (const auto& s : traj.states) {
      const StateV V = to_balanced(s, p);
      const double n2 = std::pow(sobolev_norm(V, 0.0), 2);
      const double r2 = std::pow(sobolev_norm(projector_apply(V, p.mu, Subspace::regular), 0.0), 2);
      const double s2 = std::pow(sobolev_norm(projector_apply(V, p.mu, Subspace::singular), 0.0), 2);
      CHECK(r2 + s2 == Catch::Approx(n2).epsilon(1e-10));
    }
  }
}
