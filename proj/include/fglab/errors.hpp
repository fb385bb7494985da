#pragma once

#include <stdexcept>
#include <string>

namespace fglab {

/// Depth dropped below the configured floor h_star.
struct CavitationError : std::runtime_error {
  double min_depth;
  double time;
  CavitationError(double min_depth_, double time_ = 0.0)
      : std::runtime_error("cavitation: min depth " + std::to_string(min_depth_) +
                           " below floor at t = " + std::to_string(time_)),
        min_depth(min_depth_), time(time_) {}
};

/// State left the hyperbolicity region (alpha * h < 0).
struct NonHyperbolicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance; carries the residual reached.
struct SolverError : std::runtime_error {
  double residual;
  int iterations;
  SolverError(const std::string& what, double residual_, int iterations_)
      : std::runtime_error(what + " (relative residual " + std::to_string(residual_) +
                           " after " + std::to_string(iterations_) + " iterations)"),
        residual(residual_), iterations(iterations_) {}
};

/// Field contains NaN/Inf where finite values are required.
struct InvalidFieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's domain precondition.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested feature outside the implemented range.
struct NotImplementedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fglab
