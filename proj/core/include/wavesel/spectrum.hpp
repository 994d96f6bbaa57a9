#pragma once

#include <cstddef>
#include <vector>

namespace wavesel {

// Uniform wavelength sampling plan, in meters.
struct WavelengthGrid {
  double start_m = 0.0;
  double stop_m = 0.0;
  std::size_t points = 0;

  // Throws std::invalid_argument unless 0 < start < stop and points >= 2.
  void validate() const;

  double step() const { return (stop_m - start_m) / static_cast<double>(points - 1); }
  std::vector<double> sample() const;
};

// Sampled transmission trace. Wavelengths are strictly ascending; for device
// output and file content, transmission lies in [0, 1] (validated separately
// so derived traces such as residuals can reuse the container).
struct Spectrum {
  std::vector<double> wavelength_m;
  std::vector<double> transmission;

  std::size_t size() const { return wavelength_m.size(); }

  // Structural checks: equal array sizes, strictly ascending wavelengths.
  void validate() const;

  // Range check: every sample in [0, 1] up to rounding slack (1e-12).
  void validate_transmission() const;
};

}  // namespace wavesel
