#pragma once

#include <unistd.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "wavesel/spectrum.hpp"

namespace testsup {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("wavesel_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Seed-stable uniforms built on the raw 53-bit output so values do not
// depend on library distribution internals.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
  return lo + (hi - lo) * u;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

// Inverts the exact Airy finesse for the round-trip amplitude product:
// given a target finesse, returns x with F(x) = target.
inline double x_for_finesse(double finesse) {
  const double s = std::sin(std::numbers::pi / (2.0 * finesse));
  const double u = -s + std::sqrt(s * s + 1.0);
  return u * u;
}

// Full width at half of the global maximum, measured against zero (not
// against the local baseline), with linear interpolation at the two
// crossings. Assumes the maximum is an interior peak whose shoulders fall
// below half before the grid ends.
inline double halfmax_fwhm(const wavesel::Spectrum& spectrum) {
  const auto& x = spectrum.wavelength_m;
  const auto& y = spectrum.transmission;
  const std::size_t n = y.size();
  std::size_t peak = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (y[i] > y[peak]) peak = i;
  }
  const double half = 0.5 * y[peak];

  std::size_t i = peak;
  while (i > 0 && y[i] >= half) --i;
  if (y[i] >= half) {
    throw std::runtime_error("no left half-maximum crossing on the grid");
  }
  const double xl =
      x[i] + (half - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i]);

  std::size_t j = peak;
  while (j + 1 < n && y[j] >= half) ++j;
  if (y[j] >= half) {
    throw std::runtime_error("no right half-maximum crossing on the grid");
  }
  const double xr =
      x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1]);
  return xr - xl;
}

}  // namespace testsup
