/// @file test_toy.cpp
/// @brief The three singular-limit model problems: exact oscillator solution,
/// transport by characteristics, and the dispersive combined model.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fglab/toy.hpp"

using namespace fglab;

namespace {

ComplexField band_limited_u0(GridSpec g) {
  return ComplexField::sample(g, [](double x) {
    return std::complex<double>(std::cos(x) + 0.3 * std::sin(2 * x), 0.2 * std::cos(3 * x));
  });
}

ComplexField exact_const_h_combined(const ToySpec& spec, double c, double t) {
  auto coeff = fglab::detail::cfft(spec.u0.v);
  const GridSpec g = spec.u0.grid;
  for (int k = 0; k < g.n_points; ++k) {
    const double w = signed_wavenumber(g, k);
    const double phase = t * c / spec.epsilon * std::sqrt(1.0 + spec.mu * w * w);
    coeff[k] *= std::exp(std::complex<double>(0.0, phase));
  }
  return {g, fglab::detail::icfft(coeff)};
}

}  // namespace

TEST_CASE("oscillator exact solution") {
  GridSpec g(128);
  const double eps = 0.05;

  SECTION("t = 0 returns the data; constant h only rotates the phase") {
    ToySpec spec(ToyModel::oscillator, eps, 0.0, ScalarField(g, 1.3), band_limited_u0(g));
    auto u0 = toy_oscillator_exact(spec, 0.0);
    for (int j = 0; j < g.n_points; ++j) CHECK(std::abs(u0[j] - spec.u0[j]) < 1e-15);

    auto ut = toy_oscillator_exact(spec, 0.7);
    const std::complex<double> expected_phase = std::exp(std::complex<double>(0.0, 0.7 * 1.3 / eps));
    for (int j = 0; j < g.n_points; ++j)
      CHECK(std::abs(ut[j] - spec.u0[j] * expected_phase) < 1e-13);
    CHECK(l2_norm(ut) == Catch::Approx(l2_norm(spec.u0)).epsilon(1e-12));
  }

  SECTION("derivative growth law for h = 1 + delta cos x") {
    const double delta = 0.3;
    auto h = ScalarField::sample(g, [delta](double x) { return 1.0 + delta * std::cos(x); });
    auto u0 = ComplexField::sample(g, [](double x) {
      return std::complex<double>(std::cos(x) + 0.4 * std::sin(2 * x), 0.0);  // real data
    });
    ToySpec spec(ToyModel::oscillator, eps, 0.0, h, u0);

    ScalarField u0r(g), hp(g);
    for (int j = 0; j < g.n_points; ++j) u0r[j] = u0[j].real();
    hp = spectral_derivative(h, 1);
    const double base = std::pow(l2_norm(spectral_derivative(u0, 1)), 2);
    const double gain = std::pow(l2_norm(pointwise_mul(u0r, hp)), 2);

    for (double t : {0.2, 0.5, 1.0}) {
      auto ut = toy_oscillator_exact(spec, t);
      const double lhs = std::pow(l2_norm(spectral_derivative(ut, 1)), 2);
      const double rhs = base + (t / eps) * (t / eps) * gain;
      CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));
      CHECK(l2_norm(ut) == Catch::Approx(l2_norm(u0)).epsilon(1e-12));  // unitary
    }
  }
}

TEST_CASE("transport solve by characteristics") {
  GridSpec g(128);
  const double eps = 0.1;

  SECTION("constant h is an exact shift") {
    const double c = 0.8;
    ToySpec spec(ToyModel::transport, eps, 0.0, ScalarField(g, c), band_limited_u0(g));
    const double t = 0.37;
    auto ut = toy_transport_solve(spec, t);
    auto expected = ComplexField::sample(g, [&](double x) {
      const double y = x + c * t / eps;
      return std::complex<double>(std::cos(y) + 0.3 * std::sin(2 * y), 0.2 * std::cos(3 * y));
    });
    for (int j = 0; j < g.n_points; ++j) CHECK(std::abs(ut[j] - expected[j]) < 1e-9);
    CHECK(l2_norm(ut) == Catch::Approx(l2_norm(spec.u0)).epsilon(1e-8));
  }

  SECTION("t = 0 returns the data") {
    ToySpec spec(ToyModel::transport, eps, 0.0,
                 ScalarField::sample(g, [](double x) { return 1.0 + 0.2 * std::sin(x); }),
                 band_limited_u0(g));
    auto u0 = toy_transport_solve(spec, 0.0);
    for (int j = 0; j < g.n_points; ++j) CHECK(std::abs(u0[j] - spec.u0[j]) < 1e-12);
  }

  SECTION("variable h preserves the sup norm") {
    auto h = ScalarField::sample(g, [](double x) { return 1.0 + 0.25 * std::cos(x); });
    ToySpec spec(ToyModel::transport, eps, 0.0, h, band_limited_u0(g));
    // traced points sample u0 between grid nodes, so compare against the
    // interpolant's sup, not the grid max
    const fglab::detail::ComplexTrigEval u0_eval(spec.u0);
    double sup0 = 0.0;
    for (int j = 0; j < 16 * g.n_points; ++j)
      sup0 = std::max(sup0, std::abs(u0_eval(j * g.length / (16 * g.n_points))));
    for (double t : {0.3, 0.9}) {
      auto ut = toy_transport_solve(spec, t);
      CHECK(linf_norm(ut) <= sup0 * (1.0 + 1e-8));
      CHECK(linf_norm(ut) >= 0.95 * sup0);
    }
  }
}

TEST_CASE("combined model propagator") {
  GridSpec g(128);
  const double eps = 0.05;

  SECTION("mu = 0 reduces to the oscillator") {
    auto h = ScalarField::sample(g, [](double x) { return 1.0 + 0.2 * std::cos(x); });
    ToySpec spec(ToyModel::combined, eps, 0.0, h, band_limited_u0(g));
    const double t = 0.4;
    auto mine = toy_combined_solve(spec, t);
    auto exact = toy_oscillator_exact(spec, t);
    double worst = 0.0;
    for (int j = 0; j < g.n_points; ++j) worst = std::max(worst, std::abs(mine[j] - exact[j]));
    CHECK(worst < 1e-10);
  }

  SECTION("constant h matches the exact Fourier solution to 1e-10") {
    const double c = 1.1, mu = 0.3;
    ToySpec spec(ToyModel::combined, eps, mu, ScalarField(g, c), band_limited_u0(g));
    const double t = 0.3;
    auto mine = toy_combined_solve(spec, t);
    auto exact = exact_const_h_combined(spec, c, t);
    double worst = 0.0;
    for (int j = 0; j < g.n_points; ++j) worst = std::max(worst, std::abs(mine[j] - exact[j]));
    CHECK(worst < 1e-10);
    CHECK(l2_norm(mine) == Catch::Approx(l2_norm(spec.u0)).epsilon(1e-10));
  }

  SECTION("the 1/h-weighted norm is the exact invariant for variable h") {
    auto h = ScalarField::sample(g, [](double x) { return 1.0 + 0.25 * std::cos(x); });
    ToySpec spec(ToyModel::combined, eps, 0.4, h, band_limited_u0(g));
    const double before = weighted_l2_norm(spec.u0, h);
    for (double t : {0.2, 0.6}) {
      auto ut = toy_combined_solve(spec, t);
      CHECK(weighted_l2_norm(ut, h) == Catch::Approx(before).epsilon(1e-10));
    }
  }

  SECTION("answer is insensitive to the substep size") {
    auto h = ScalarField::sample(g, [](double x) { return 1.0 + 0.25 * std::cos(x); });
    ToySpec spec(ToyModel::combined, eps, 0.2, h, band_limited_u0(g));
    auto coarse = toy_combined_solve(spec, 0.5, 60.0);
    auto fine = toy_combined_solve(spec, 0.5, 15.0);
    double worst = 0.0;
    for (int j = 0; j < g.n_points; ++j) worst = std::max(worst, std::abs(coarse[j] - fine[j]));
    CHECK(worst < 1e-10);
  }

  SECTION("prepared amplitude scaling controls derivatives (smoke)") {
    const double delta = 0.25;
    auto h = ScalarField::sample(g, [delta](double x) { return 1.0 + delta * std::cos(x); });
    auto u0 = ComplexField::sample(g, [](double x) {
      return std::exp(std::complex<double>(0.0, x));  // single low mode
    });
    for (double mu : {1.0, 0.1}) {
      ToySpec spec(ToyModel::combined, 0.02, mu, h, u0);
      double worst = 0.0;
      for (double t : {1.0, 2.0, 4.0}) {
        auto ut = toy_combined_solve(spec, t);
        const double ratio =
            l2_norm(spectral_derivative(ut, 1)) / (l2_norm(u0) / std::sqrt(mu));
        worst = std::max(worst, ratio);
      }
      CHECK(worst < 10.0);
    }
  }
}
