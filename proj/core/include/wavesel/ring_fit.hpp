#pragma once

#include <vector>

#include "wavesel/devices.hpp"
#include "wavesel/spectrum.hpp"

namespace wavesel {

enum class RingPort { through, drop };

// Fittable microring parameters. kappa varies both couplers symmetrically.
enum class RingParameter { kappa, alpha, n_eff, radius };

struct ParameterBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct RingFitProblem {
  Spectrum data;
  RingPort port = RingPort::through;
  // Starting point; parameters not listed as free are held at these values.
  MicroringSpec initial;
  std::vector<RingParameter> free_parameters = {
      RingParameter::kappa, RingParameter::alpha, RingParameter::n_eff};
  ParameterBounds kappa_bounds{1e-6, 0.999};
  ParameterBounds alpha_bounds{0.0, 1e4};
  ParameterBounds n_eff_bounds{1.0, 5.0};
  ParameterBounds radius_bounds{1e-6, 1e-3};
  int max_iterations = 500;
  double step_tolerance = 1e-9;
  // Passed to the resonance scan used to realign the starting n_eff.
  double prominence_threshold = 0.1;
};

struct RingFitResult {
  MicroringSpec params;
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // Parameter directions indistinguishable on this data (degenerate or
  // near-degenerate sensitivities); parameters are still returned.
  bool ill_conditioned = false;
  // sigma^2 * diag((J^T J)^-1) aligned with free_parameters; empty when the
  // normal equations cannot support it.
  std::vector<double> covariance_diag;
};

// Least-squares fit of the microring model to a measured port spectrum.
// When n_eff is free its starting value is re-derived from the resonance
// comb in the data (adjacent-spacing estimate snapped so an integer
// resonance order lands on an observed center): offsets of a few percent in
// n_eff already alias the comb by whole orders, so the user-supplied start
// only selects the branch when the data shows no usable features.
// Throws std::invalid_argument on malformed problems; non-convergence is
// reported through the result flags, never by weakening the fit.
RingFitResult fit_microring(const RingFitProblem& problem);

// Model-minus-data on the problem grid for the given parameters.
Spectrum residual_curve(const MicroringSpec& params,
                        const RingFitProblem& problem);

}  // namespace wavesel
