/// @file test_prep.cpp
/// @brief Well-prepared initial data: corrector fields, order-by-order
/// construction, and the vanishing of initial time derivatives of eta - h.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fglab/prep.hpp"

using namespace fglab;

TEST_CASE("c1 closed forms") {
  GridSpec g(64);

  auto zeta0 = ScalarField(g);
  auto u_const = ScalarField(g, 0.7);
  CHECK(compute_c1(zeta0, u_const).max_abs() < 1e-13);

  auto u0 = ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); });
  auto c1 = compute_c1(zeta0, u0);
  for (int j = 0; j < g.n_points; ++j)
    CHECK(c1[j] == Catch::Approx(-0.1 * std::cos(g.node(j))).margin(1e-13));

  auto zc = ScalarField::sample(g, [](double x) { return std::cos(x); });
  auto us = ScalarField::sample(g, [](double x) { return std::sin(x); });
  auto c1b = compute_c1(zc, us);
  for (int j = 0; j < g.n_points; ++j) {
    const double x = g.node(j);
    CHECK(c1b[j] == Catch::Approx(-(1.0 + std::cos(x)) * std::cos(x)).margin(1e-12));
  }
}

TEST_CASE("c2 hand-computed single-mode value") {
  GridSpec g(64);
  const double a = 0.1;
  const double mu = 0.3;
  auto zeta0 = ScalarField(g);
  auto u0 = ScalarField::sample(g, [a](double x) { return a * std::sin(x); });

  // rhs = -a^2 (1 + cos 2x); t[1] divides the cos 2x mode by (1 + 4 mu / 3)
  auto c2 = compute_c2(zeta0, u0, mu);
  for (int j = 0; j < g.n_points; ++j) {
    const double expected = -a * a - a * a * std::cos(2.0 * g.node(j)) / (1.0 + 4.0 * mu / 3.0);
    CHECK(c2[j] == Catch::Approx(expected).margin(1e-12));
  }

  CHECK(compute_c2(ScalarField(g), ScalarField(g), mu).max_abs() < 1e-13);
}

TEST_CASE("c2 satisfies its defining elliptic equation") {
  GridSpec g(96);
  const double mu = 0.2;
  auto zeta0 = ScalarField::sample(g, [](double x) { return 0.08 * std::cos(x) + 0.03 * std::sin(2 * x); });
  auto u0 = ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x) - 0.04 * std::cos(3 * x); });

  ScalarField h0 = zeta0;
  for (int j = 0; j < g.n_points; ++j) h0[j] += 1.0;

  // independent right-hand side assembly (no truncation; fields are band-limited)
  auto ux = spectral_derivative(u0, 1);
  auto uxx = spectral_derivative(u0, 2);
  ScalarField rhs(g);
  auto uux_x = spectral_derivative(pointwise_mul(u0, ux), 1);
  auto zxx = spectral_derivative(zeta0, 2);
  for (int j = 0; j < g.n_points; ++j) {
    const double h3 = h0[j] * h0[j] * h0[j];
    rhs[j] = h3 * (u0[j] * uxx[j] - ux[j] * ux[j] - zxx[j] - uux_x[j]);
  }

  auto c2 = compute_c2(zeta0, u0, mu);
  auto applied = t_apply(h0, c2, mu);
  CHECK(sobolev_norm(applied - rhs, 0.0) <= 1e-9 * std::max(1.0, sobolev_norm(rhs, 0.0)));
}

TEST_CASE("prepare orders") {
  GridSpec g(64);
  ParamSet p(100.0, 0.1);
  auto zeta0 = ScalarField::sample(g, [](double x) { return 0.05 * std::cos(x); });
  auto u0 = ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); });
  ScalarField h0 = zeta0;
  for (int j = 0; j < g.n_points; ++j) h0[j] += 1.0;

  SECTION("m = 0 is the naive lift") {
    auto d = prepare(zeta0, u0, 0, p);
    CHECK((d.U0.eta - h0).max_abs() == 0.0);
    CHECK(d.U0.w.max_abs() == 0.0);
    CHECK_FALSE(d.c1.has_value());
  }

  SECTION("m = 1 sets w0 = c1") {
    auto d = prepare(zeta0, u0, 1, p);
    CHECK((d.U0.w - compute_c1(zeta0, u0)).max_abs() == 0.0);
    CHECK((d.U0.eta - h0).max_abs() == 0.0);
  }

  SECTION("m = 1 with constant velocity degenerates to rest lift") {
    auto d = prepare(zeta0, ScalarField(g, 0.3), 1, p);
    CHECK(d.U0.w.max_abs() < 1e-13);
    CHECK((d.U0.eta - h0).max_abs() == 0.0);
  }

  SECTION("m = 2 shifts eta0 by c2 / lambda") {
    auto d = prepare(zeta0, u0, 2, p);
    REQUIRE(d.c2.has_value());
    auto expected = h0 + (1.0 / p.lambda) * (*d.c2);
    CHECK((d.U0.eta - expected).max_abs() < 1e-15);
    CHECK((d.U0.w - compute_c1(zeta0, u0)).max_abs() == 0.0);
  }

  SECTION("m = 2 against the single-mode hand value") {
    const double a = 0.1;
    ParamSet q(100.0, 0.3);
    auto d = prepare(ScalarField(g), ScalarField::sample(g, [a](double x) { return a * std::sin(x); }),
                     2, q);
    for (int j = 0; j < g.n_points; ++j) {
      const double c2 = -a * a - a * a * std::cos(2.0 * g.node(j)) / (1.0 + 4.0 * q.mu / 3.0);
      CHECK(d.U0.eta[j] == Catch::Approx(1.0 + c2 / 100.0).margin(1e-12));
    }
  }

  SECTION("m > 2 is rejected") {
    CHECK_THROWS_AS(prepare(zeta0, u0, 3, p), NotImplementedError);
  }

  SECTION("cavitation guard") {
    CHECK_THROWS_AS(prepare(ScalarField(g, -0.9), u0, 1, p), CavitationError);
  }
}

TEST_CASE("initial d_t(eta - h) vanishes for prepared data") {
  GridSpec g(64);
  auto zeta0 = ScalarField::sample(g, [](double x) { return 0.05 * std::cos(x); });
  auto u0 = ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); });

  ParamSet p(1000.0, 0.1);
  auto d1 = prepare(zeta0, u0, 1, p);
  CHECK(sobolev_norm(eta_minus_h_dt(d1.U0, p), 0.0) < 1e-9);

  // naive data leaves the O(1) mismatch w* = -h div u
  auto d0 = prepare(zeta0, u0, 0, p);
  CHECK(sobolev_norm(eta_minus_h_dt(d0.U0, p), 0.0) > 0.05);

  // m = 2 reintroduces only an O(1/lambda) drift through eta0
  ParamSet pa(1e3, 0.1), pb(1e4, 0.1);
  const double da = sobolev_norm(eta_minus_h_dt(prepare(zeta0, u0, 2, pa).U0, pa), 0.0);
  const double db = sobolev_norm(eta_minus_h_dt(prepare(zeta0, u0, 2, pb).U0, pb), 0.0);
  CHECK(da < 1e-5);
  CHECK(da / db == Catch::Approx(10.0).epsilon(0.3));
}

TEST_CASE("initial d_t^2(eta - h) decays like 1/lambda for m = 2") {
  GridSpec g(64);
  auto zeta0 = ScalarField(g);
  auto u0 = ScalarField::sample(g, [](double x) { return 0.1 * std::sin(x); });

  std::vector<double> lambdas{1e3, 1e4, 1e5};
  std::vector<double> m2_vals;
  for (double l : lambdas) {
    ParamSet p(l, 0.1);
    m2_vals.push_back(sobolev_norm(eta_minus_h_dt2(prepare(zeta0, u0, 2, p).U0, p), 0.0));
  }
  // successive decades shrink the composed second derivative ~10x
  CHECK(m2_vals[0] / m2_vals[1] == Catch::Approx(10.0).epsilon(0.35));
  CHECK(m2_vals[1] / m2_vals[2] == Catch::Approx(10.0).epsilon(0.35));

  // while unprepared data stays O(1)
  ParamSet p(1e4, 0.1);
  const double m0_val = sobolev_norm(eta_minus_h_dt2(prepare(zeta0, u0, 0, p).U0, p), 0.0);
  CHECK(m0_val > 100.0 * m2_vals[1]);
}

TEST_CASE("preparedness report of a rest trajectory is zero") {
  GridSpec g(32);
  ParamSet p(50.0, 0.2);
  Trajectory traj{SystemKind::fg, p, StepPolicy{}, {0.0, 0.1, 0.2},
                  {StateU::rest(g), StateU::rest(g), StateU::rest(g)}};
  for (double v : preparedness_report(traj, p, 1.0)) CHECK(v == 0.0);
}
