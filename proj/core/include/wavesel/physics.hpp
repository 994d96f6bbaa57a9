#pragma once

namespace wavesel {

// Scalar relations between photon energy, spectral width, and interaction
// time for wavelength-selective devices. All quantities are SI (meters,
// seconds, joules, rad/s); arguments are validated and throw
// std::invalid_argument when out of domain.

// omega = 2*pi*c / lambda.
double angular_frequency(double wavelength_m);

// E = h*c / lambda.
double photon_energy(double wavelength_m);

// Smallest resolvable wavelength interval for an energy-time product at the
// Heisenberg limit: delta_lambda = lambda^2 / (4*pi*c*delta_t).
double hup_min_linewidth(double wavelength_m, double delta_t_s);

// Linewidth reached by a resonator that stores light for delta_t:
// delta_lambda = lambda^2 / (2*pi*c*delta_t), twice the minimum-uncertainty
// value (field decay is one-sided in time).
double resonator_linewidth_bound(double wavelength_m, double delta_t_s);

// Path length covered during the interaction time: delta_l = c*delta_t.
double coherence_length(double delta_t_s);

// Photon dwell time in a two-mirror cavity of optical length n*d whose
// finesse sets the number of round trips: delta_t = finesse*n*d / (pi*c).
double fp_time_uncertainty(double finesse, double refractive_index,
                           double cavity_length_m);

// Effective number of round trips stored by a cavity: m = finesse / (2*pi).
double roundtrips_from_finesse(double finesse);

// Resolvance lambda/delta_lambda of a diffraction grating: order * lines.
double grating_resolvance(int order, int lines);

// Resolvance of an arrayed-waveguide grating: the total optical path spread
// across the arms divided by the wavelength,
// (arms - 1) * delta_length * n_eff / lambda.
double awg_resolvance(int arms, double delta_length_m, double n_eff,
                      double wavelength_m);

// First-order conversion of a wavelength interval to angular frequency:
// delta_omega = 2*pi*c * delta_lambda / lambda^2.
double delta_omega_from_delta_lambda(double delta_lambda_m,
                                     double wavelength_m);

// A monochromatic field state at a given vacuum wavelength.
struct PhotonState {
  double wavelength_m = 0.0;
  double angular_frequency_rad_s = 0.0;
  double energy_j = 0.0;

  static PhotonState from_wavelength(double wavelength_m);
};

// Minimum-uncertainty spectral/temporal widths tied to one interaction time.
struct UncertaintyPair {
  double delta_t_s = 0.0;
  double delta_l_m = 0.0;
  double delta_lambda_m = 0.0;
  double delta_omega_rad_s = 0.0;

  static UncertaintyPair from_time(double delta_t_s, double wavelength_m);
};

}  // namespace wavesel
