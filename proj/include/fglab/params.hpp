#pragma once

#include <stdexcept>

namespace fglab {

/// Relaxation parameter lambda, shallowness parameter mu, plus the bound nu
/// defining the admissible parameter set and the depth floor h_star.
struct ParamSet {
  double lambda;
  double mu;
  double nu = 100.0;
  double h_star = 0.5;

  ParamSet(double lambda_, double mu_, double nu_ = 100.0, double h_star_ = 0.5)
      : lambda(lambda_), mu(mu_), nu(nu_), h_star(h_star_) {
    if (!(lambda > 0.0) || !(mu > 0.0) || !(nu > 0.0) || !(h_star > 0.0))
      throw std::invalid_argument("ParamSet: lambda, mu, nu, h_star must be positive");
  }

  double lambda_mu() const { return lambda * mu; }

  /// Membership in the admissible set: 1/lambda + mu + 1/(lambda*mu) <= nu.
  bool in_admissible_set() const { return 1.0 / lambda + mu + 1.0 / (lambda * mu) <= nu; }
};

}  // namespace fglab
