#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace wavesel {

// Fills `residuals` (preallocated to the declared count) for the given
// parameter vector. Must tolerate parameter excursions of finite-difference
// size beyond the bounds.
using ResidualFn =
    std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct LeastSquaresOptions {
  int max_iterations = 500;
  // Converged when every accepted parameter step is below this, relative to
  // max(|p|, typical scale).
  double step_tolerance = 1e-9;
  double initial_damping = 1e-3;
  double jacobian_rel_step = 1e-6;
  // Per-parameter magnitude floors for differencing and the step criterion;
  // empty means 1.0 for all. Bounds are enforced by projection; empty means
  // unbounded.
  std::vector<double> typical_scale;
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;
};

struct LeastSquaresResult {
  std::vector<double> parameters;
  double cost = 0.0;          // sum of squared residuals
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // A parameter had no residual sensitivity (zero Jacobian column): the
  // normal equations cannot be solved for any damping.
  bool singular = false;
  // Normal equations solvable but numerically rank-deficient at the
  // solution: parameter directions are indistinguishable.
  bool ill_conditioned = false;
  // sigma^2 * diag((J^T J)^-1) in parameter order; empty when unavailable.
  std::vector<double> covariance_diag;
  // Accepted cost after each iteration (non-increasing by construction).
  std::vector<double> cost_history;
};

// Damped least squares with geometric damping adaptation: solve
// (J^T J + mu*diag(J^T J)) delta = -J^T r, double mu on rejection, shrink it
// on acceptance, accept only non-increasing cost. Derivatives are central
// differences. Throws std::invalid_argument on malformed inputs.
LeastSquaresResult solve_least_squares(const ResidualFn& fn,
                                       std::vector<double> initial,
                                       std::size_t residual_count,
                                       const LeastSquaresOptions& options = {});

}  // namespace wavesel
