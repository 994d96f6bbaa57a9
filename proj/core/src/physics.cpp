#include "wavesel/physics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wavesel/constants.hpp"

namespace wavesel {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double angular_frequency(double wavelength_m) {
  require_positive(wavelength_m, "wavelength");
  return 2.0 * kPi * kSpeedOfLight / wavelength_m;
}

double photon_energy(double wavelength_m) {
  require_positive(wavelength_m, "wavelength");
  return kPlanck * kSpeedOfLight / wavelength_m;
}

double hup_min_linewidth(double wavelength_m, double delta_t_s) {
  require_positive(wavelength_m, "wavelength");
  require_positive(delta_t_s, "delta_t");
  return wavelength_m * wavelength_m / (4.0 * kPi * kSpeedOfLight * delta_t_s);
}

double resonator_linewidth_bound(double wavelength_m, double delta_t_s) {
  return 2.0 * hup_min_linewidth(wavelength_m, delta_t_s);
}

double coherence_length(double delta_t_s) {
  require_positive(delta_t_s, "delta_t");
  return kSpeedOfLight * delta_t_s;
}

double fp_time_uncertainty(double finesse, double refractive_index,
                           double cavity_length_m) {
  require_positive(finesse, "finesse");
  require_positive(refractive_index, "refractive_index");
  require_positive(cavity_length_m, "cavity_length");
  return finesse * refractive_index * cavity_length_m / (kPi * kSpeedOfLight);
}

double roundtrips_from_finesse(double finesse) {
  require_positive(finesse, "finesse");
  return finesse / (2.0 * kPi);
}

double grating_resolvance(int order, int lines) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (lines < 1) throw std::invalid_argument("lines must be >= 1");
  return static_cast<double>(order) * static_cast<double>(lines);
}

double awg_resolvance(int arms, double delta_length_m, double n_eff,
                      double wavelength_m) {
  if (arms < 2) throw std::invalid_argument("arms must be >= 2");
  require_positive(delta_length_m, "delta_length");
  require_positive(n_eff, "n_eff");
  require_positive(wavelength_m, "wavelength");
  return static_cast<double>(arms - 1) * delta_length_m * n_eff / wavelength_m;
}

double delta_omega_from_delta_lambda(double delta_lambda_m,
                                     double wavelength_m) {
  require_positive(delta_lambda_m, "delta_lambda");
  require_positive(wavelength_m, "wavelength");
  return 2.0 * kPi * kSpeedOfLight * delta_lambda_m /
         (wavelength_m * wavelength_m);
}

PhotonState PhotonState::from_wavelength(double wavelength_m) {
  PhotonState state;
  state.wavelength_m = wavelength_m;
  state.angular_frequency_rad_s = angular_frequency(wavelength_m);
  state.energy_j = photon_energy(wavelength_m);
  return state;
}

UncertaintyPair UncertaintyPair::from_time(double delta_t_s,
                                           double wavelength_m) {
  UncertaintyPair pair;
  pair.delta_t_s = delta_t_s;
  pair.delta_l_m = coherence_length(delta_t_s);
  pair.delta_lambda_m = hup_min_linewidth(wavelength_m, delta_t_s);
  pair.delta_omega_rad_s =
      delta_omega_from_delta_lambda(pair.delta_lambda_m, wavelength_m);
  return pair;
}

}  // namespace wavesel
