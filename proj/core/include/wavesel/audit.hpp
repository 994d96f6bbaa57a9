#pragma once

#include <string>

#include "wavesel/analysis.hpp"
#include "wavesel/devices.hpp"

namespace wavesel {

// Comparison of a device linewidth against the stored-photon resolution
// bounds at its interaction time.
struct HupReport {
  std::string device_summary;
  double wavelength_m = 0.0;
  double delta_t_s = 0.0;            // interaction (storage) time
  double delta_l_m = 0.0;            // optical path covered in delta_t
  double min_uncertainty_bound_m = 0.0;  // lambda^2 / (4*pi*c*delta_t)
  double resonator_bound_m = 0.0;        // lambda^2 / (2*pi*c*delta_t)
  double linewidth_m = 0.0;          // audited linewidth
  double ratio_min_uncertainty = 0.0;    // linewidth / min bound
  double ratio_resonator = 0.0;          // linewidth / resonator bound
  bool pass = false;
};

// Interaction time of the device at the given wavelength. Resonator
// families (microring, two-mirror cavity) take it from the measured finesse
// in `metrics` and throw std::invalid_argument when none is available;
// dispersive families (grating, AWG) need only their geometry.
double device_delta_t(const DeviceSpec& device, double wavelength_m,
                      const SpectralMetrics& metrics);

// Audits against the minimum-uncertainty floor: pass when the linewidth is
// no smaller than the floor up to rounding slack (factor 1 - 1e-6). The
// audited linewidth is the measured median FWHM for resonators and the
// design value lambda / resolvance for dispersive devices.
HupReport audit_device(const DeviceSpec& device, const SpectralMetrics& metrics,
                       double wavelength_m);

}  // namespace wavesel
