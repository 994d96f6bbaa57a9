#include "wavesel/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavesel {

void WavelengthGrid::validate() const {
  if (!(start_m > 0.0) || !std::isfinite(start_m)) {
    throw std::invalid_argument("grid start must be positive and finite");
  }
  if (!(stop_m > start_m) || !std::isfinite(stop_m)) {
    throw std::invalid_argument("grid stop must exceed start");
  }
  if (points < 2) {
    throw std::invalid_argument("grid needs at least two points");
  }
}

std::vector<double> WavelengthGrid::sample() const {
  validate();
  std::vector<double> out(points);
  const double h = step();
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = start_m + h * static_cast<double>(i);
  }
  out.back() = stop_m;
  return out;
}

void Spectrum::validate() const {
  if (wavelength_m.size() != transmission.size()) {
    throw std::invalid_argument("wavelength and transmission sizes differ");
  }
  for (std::size_t i = 0; i < wavelength_m.size(); ++i) {
    if (!std::isfinite(wavelength_m[i]) || wavelength_m[i] <= 0.0) {
      throw std::invalid_argument("wavelength must be positive and finite at row " +
                                  std::to_string(i + 1));
    }
    if (i > 0 && !(wavelength_m[i] > wavelength_m[i - 1])) {
      throw std::invalid_argument("wavelengths must be strictly ascending at row " +
                                  std::to_string(i + 1));
    }
  }
}

void Spectrum::validate_transmission() const {
  constexpr double kSlack = 1e-12;
  for (std::size_t i = 0; i < transmission.size(); ++i) {
    const double t = transmission[i];
    if (!std::isfinite(t) || t < -kSlack || t > 1.0 + kSlack) {
      throw std::invalid_argument("transmission outside [0, 1] at row " +
                                  std::to_string(i + 1));
    }
  }
}

}  // namespace wavesel
