#pragma once

#include <string>
#include <variant>

#include "wavesel/spectrum.hpp"

namespace wavesel {

// Add-drop microring resonator. kappa1/kappa2 are power cross-coupling
// fractions of the two bus couplers, alpha_per_m is the power attenuation
// coefficient of the waveguide, margin_m pads the footprint estimate.
struct MicroringSpec {
  double radius_m = 25e-6;
  double n_eff = 1.814;
  double kappa1 = 0.0163;
  double kappa2 = 0.0163;
  double alpha_per_m = 0.0;
  double margin_m = 2.5e-6;

  void validate() const;
};

// Two-mirror cavity of geometric length length_m filled with index
// refractive_index; both mirrors have power reflectance mirror_reflectance.
// aperture_m is the transverse size used for the footprint estimate.
struct FabryPerotSpec {
  double refractive_index = 1.5;
  double length_m = 100e-6;
  double mirror_reflectance = 0.9;
  double aperture_m = 10e-6;

  void validate() const;
};

// Ruled diffraction grating used in order `order` with `lines` illuminated
// grooves. pitch_m and length_m are only needed for the footprint and have
// no defaults (0 means unset).
struct GratingSpec {
  int order = 1;
  int lines = 1000;
  double pitch_m = 0.0;
  double length_m = 0.0;

  void validate() const;
};

// Arrayed-waveguide grating with `arms` waveguides incremented by
// delta_length_m. pitch_m and length_m are only needed for the footprint.
struct AwgSpec {
  int arms = 2;
  double delta_length_m = 0.0;
  double n_eff = 1.45;
  double pitch_m = 0.0;
  double length_m = 0.0;

  void validate() const;
};

using DeviceSpec = std::variant<MicroringSpec, FabryPerotSpec, GratingSpec, AwgSpec>;

// One-line human-readable parameter summary, used in reports.
std::string describe(const DeviceSpec& device);

// Field amplitude surviving one full round trip: exp(-alpha*pi*R).
double round_trip_amplitude(const MicroringSpec& ring);

// Fraction of power lost per round trip including both couplers:
// 1 - a^2*(1 - kappa1)*(1 - kappa2).
double round_trip_loss(const MicroringSpec& ring);

// Free spectral range lambda^2 / (2*pi*R*n_eff) at the given wavelength.
double microring_fsr(const MicroringSpec& ring, double wavelength_m);

// Finesse of the ring from its round-trip amplitude, exact for the Airy
// lineshape: pi / (2*asin((1 - x)/(2*sqrt(x)))) with x = t1*t2*a.
// Throws std::domain_error when the resonance is broader than the spacing
// (x <= 3 - 2*sqrt(2)).
double microring_closed_form_finesse(const MicroringSpec& ring);

// High-finesse approximation pi*sqrt(x)/(1 - x) of the same quantity.
double microring_finesse_approximation(const MicroringSpec& ring);

// Through-port and drop-port power transmission sampled on the grid.
Spectrum microring_through_spectrum(const MicroringSpec& ring,
                                    const WavelengthGrid& grid);
Spectrum microring_drop_spectrum(const MicroringSpec& ring,
                                 const WavelengthGrid& grid);

// Airy transmission of the two-mirror cavity sampled on the grid.
Spectrum fabry_perot_spectrum(const FabryPerotSpec& cavity,
                              const WavelengthGrid& grid);

// Chip area in m^2: microring (2R + 2*margin)^2; cavity length*aperture;
// grating (lines*pitch)*length; AWG (arms*pitch)*length. Grating and AWG
// throw std::invalid_argument unless pitch and length are set.
double device_footprint(const DeviceSpec& device);

// Expected samples across one linewidth for the grid, used to warn about
// undersampled simulations (returns estimated FWHM divided by grid step).
double estimated_points_per_fwhm(const MicroringSpec& ring,
                                 const WavelengthGrid& grid);
double estimated_points_per_fwhm(const FabryPerotSpec& cavity,
                                 const WavelengthGrid& grid);

namespace detail {

// Shared Airy algebra. x is the loop amplitude factor: t1*t2*a for the ring,
// mirror reflectance for the two-mirror cavity.
double airy_finesse_exact(double x);
double airy_finesse_approximation(double x);

struct RingPortResponse {
  double through = 0.0;
  double drop = 0.0;
};

// Single-wavelength evaluation of the add-drop ring (power transmission).
RingPortResponse ring_response(const MicroringSpec& ring, double wavelength_m);

// Airy transmission of the cavity at one wavelength.
double fp_response(const FabryPerotSpec& cavity, double wavelength_m);

}  // namespace detail

}  // namespace wavesel
