#include "wavesel/ring_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavesel/analysis.hpp"
#include "wavesel/constants.hpp"
#include "wavesel/least_squares.hpp"

namespace wavesel {

namespace {

struct ParameterLayout {
  std::vector<RingParameter> order;
  std::vector<double> initial;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> scale;
};

double parameter_value(const MicroringSpec& spec, RingParameter p) {
  switch (p) {
    case RingParameter::kappa: return spec.kappa1;
    case RingParameter::alpha: return spec.alpha_per_m;
    case RingParameter::n_eff: return spec.n_eff;
    case RingParameter::radius: return spec.radius_m;
  }
  throw std::invalid_argument("unknown ring parameter");
}

void apply_parameter(MicroringSpec& spec, RingParameter p, double value) {
  switch (p) {
    case RingParameter::kappa:
      spec.kappa1 = value;
      spec.kappa2 = value;
      return;
    case RingParameter::alpha: spec.alpha_per_m = value; return;
    case RingParameter::n_eff: spec.n_eff = value; return;
    case RingParameter::radius: spec.radius_m = value; return;
  }
  throw std::invalid_argument("unknown ring parameter");
}

ParameterLayout build_layout(const RingFitProblem& problem,
                             const MicroringSpec& start) {
  if (problem.free_parameters.empty()) {
    throw std::invalid_argument("no free parameters in fit");
  }
  ParameterLayout layout;
  for (RingParameter p : problem.free_parameters) {
    if (std::find(layout.order.begin(), layout.order.end(), p) !=
        layout.order.end()) {
      throw std::invalid_argument("duplicate free parameter in fit");
    }
    layout.order.push_back(p);
    layout.initial.push_back(parameter_value(start, p));
    switch (p) {
      case RingParameter::kappa:
        layout.lower.push_back(problem.kappa_bounds.lower);
        layout.upper.push_back(problem.kappa_bounds.upper);
        layout.scale.push_back(0.01);
        break;
      case RingParameter::alpha:
        layout.lower.push_back(problem.alpha_bounds.lower);
        layout.upper.push_back(problem.alpha_bounds.upper);
        layout.scale.push_back(1.0);
        break;
      case RingParameter::n_eff:
        layout.lower.push_back(problem.n_eff_bounds.lower);
        layout.upper.push_back(problem.n_eff_bounds.upper);
        layout.scale.push_back(1.0);
        break;
      case RingParameter::radius:
        layout.lower.push_back(problem.radius_bounds.lower);
        layout.upper.push_back(problem.radius_bounds.upper);
        layout.scale.push_back(1e-6);
        break;
    }
  }
  for (std::size_t j = 0; j < layout.order.size(); ++j) {
    if (!(layout.lower[j] < layout.upper[j])) {
      throw std::invalid_argument("parameter bounds are empty");
    }
  }
  return layout;
}

// Starting n_eff from the observed comb: adjacent centers c_i, c_{i+1} of a
// dispersionless comb obey n_eff = c_i*c_{i+1} / (2*pi*R*(c_{i+1} - c_i));
// the median estimate is then snapped so an integer order lands on an actual
// center (the anchor), because a fractional-order start aliases the model
// comb against the data by whole resonances.
double realigned_n_eff(const RingFitProblem& problem, double fallback) {
  ResonanceScan scan;
  try {
    scan = find_resonances(problem.data, problem.prominence_threshold);
  } catch (const std::invalid_argument&) {
    return fallback;
  }
  if (scan.features.empty()) return fallback;

  std::vector<double> centers;
  centers.reserve(scan.features.size());
  for (const ResonanceFeature& f : scan.features) {
    centers.push_back(f.center_m);
  }
  std::sort(centers.begin(), centers.end());
  const double circumference = 2.0 * kPi * problem.initial.radius_m;
  const double anchor = centers[(centers.size() - 1) / 2];

  double estimate = fallback;
  if (centers.size() >= 2) {
    std::vector<double> pair_estimates;
    pair_estimates.reserve(centers.size() - 1);
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
      pair_estimates.push_back(centers[i] * centers[i + 1] /
                               (circumference * (centers[i + 1] - centers[i])));
    }
    std::sort(pair_estimates.begin(), pair_estimates.end());
    const std::size_t n = pair_estimates.size();
    estimate = n % 2 == 1
                   ? pair_estimates[n / 2]
                   : 0.5 * (pair_estimates[n / 2 - 1] + pair_estimates[n / 2]);
  }

  const double order = std::round(circumference * estimate / anchor);
  if (!(order >= 1.0)) return fallback;
  return order * anchor / circumference;
}

}  // namespace

RingFitResult fit_microring(const RingFitProblem& problem) {
  problem.data.validate();
  problem.data.validate_transmission();
  problem.initial.validate();
  if (problem.data.size() < 8) {
    throw std::invalid_argument("fit needs at least 8 samples");
  }
  if (problem.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }

  MicroringSpec start = problem.initial;
  const bool n_eff_free =
      std::find(problem.free_parameters.begin(), problem.free_parameters.end(),
                RingParameter::n_eff) != problem.free_parameters.end();
  if (n_eff_free) {
    const double aligned = realigned_n_eff(problem, start.n_eff);
    start.n_eff = std::clamp(aligned, problem.n_eff_bounds.lower,
                             problem.n_eff_bounds.upper);
  }

  ParameterLayout layout = build_layout(problem, start);
  const std::vector<double>& lam = problem.data.wavelength_m;
  const std::vector<double>& t = problem.data.transmission;
  const bool through = problem.port == RingPort::through;

  ResidualFn residuals = [&](const std::vector<double>& p,
                             std::vector<double>& r) {
    MicroringSpec spec = start;
    for (std::size_t j = 0; j < layout.order.size(); ++j) {
      apply_parameter(spec, layout.order[j], p[j]);
    }
    for (std::size_t i = 0; i < lam.size(); ++i) {
      const detail::RingPortResponse resp = detail::ring_response(spec, lam[i]);
      r[i] = (through ? resp.through : resp.drop) - t[i];
    }
  };

  LeastSquaresOptions options;
  options.max_iterations = problem.max_iterations;
  options.step_tolerance = problem.step_tolerance;
  options.typical_scale = layout.scale;
  options.lower_bounds = layout.lower;
  options.upper_bounds = layout.upper;

  LeastSquaresResult solved = solve_least_squares(residuals, layout.initial,
                                                  problem.data.size(), options);

  RingFitResult out;
  out.params = start;
  for (std::size_t j = 0; j < layout.order.size(); ++j) {
    apply_parameter(out.params, layout.order[j], solved.parameters[j]);
  }
  out.rms_residual = solved.rms_residual;
  out.iterations = solved.iterations;
  out.converged = solved.converged;
  out.ill_conditioned = solved.ill_conditioned || solved.singular;
  out.covariance_diag = std::move(solved.covariance_diag);
  return out;
}

Spectrum residual_curve(const MicroringSpec& params,
                        const RingFitProblem& problem) {
  params.validate();
  problem.data.validate();
  const bool through = problem.port == RingPort::through;
  Spectrum out;
  out.wavelength_m = problem.data.wavelength_m;
  out.transmission.resize(problem.data.size());
  for (std::size_t i = 0; i < out.wavelength_m.size(); ++i) {
    const detail::RingPortResponse resp =
        detail::ring_response(params, out.wavelength_m[i]);
    out.transmission[i] =
        (through ? resp.through : resp.drop) - problem.data.transmission[i];
  }
  return out;
}

}  // namespace wavesel
