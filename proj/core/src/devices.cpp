#include "wavesel/devices.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wavesel/constants.hpp"

namespace wavesel {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::string format_value(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void MicroringSpec::validate() const {
  require(finite_positive(radius_m), "ring radius must be positive");
  require(std::isfinite(n_eff) && n_eff >= 1.0, "ring n_eff must be >= 1");
  require(std::isfinite(kappa1) && kappa1 > 0.0 && kappa1 < 1.0,
          "kappa1 must lie in (0, 1)");
  require(std::isfinite(kappa2) && kappa2 > 0.0 && kappa2 < 1.0,
          "kappa2 must lie in (0, 1)");
  require(std::isfinite(alpha_per_m) && alpha_per_m >= 0.0,
          "ring alpha must be >= 0");
  require(std::isfinite(margin_m) && margin_m >= 0.0,
          "ring margin must be >= 0");
}

void FabryPerotSpec::validate() const {
  require(std::isfinite(refractive_index) && refractive_index >= 1.0,
          "cavity index must be >= 1");
  require(finite_positive(length_m), "cavity length must be positive");
  require(std::isfinite(mirror_reflectance) && mirror_reflectance > 0.0 &&
              mirror_reflectance < 1.0,
          "mirror reflectance must lie in (0, 1)");
  require(finite_positive(aperture_m), "cavity aperture must be positive");
}

void GratingSpec::validate() const {
  require(order >= 1, "grating order must be >= 1");
  require(lines >= 1, "grating line count must be >= 1");
  require(std::isfinite(pitch_m) && pitch_m >= 0.0,
          "grating pitch must be >= 0");
  require(std::isfinite(length_m) && length_m >= 0.0,
          "grating length must be >= 0");
}

void AwgSpec::validate() const {
  require(arms >= 2, "awg needs at least two arms");
  require(finite_positive(delta_length_m),
          "awg path increment must be positive");
  require(std::isfinite(n_eff) && n_eff >= 1.0, "awg n_eff must be >= 1");
  require(std::isfinite(pitch_m) && pitch_m >= 0.0, "awg pitch must be >= 0");
  require(std::isfinite(length_m) && length_m >= 0.0,
          "awg length must be >= 0");
}

std::string describe(const DeviceSpec& device) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  if (const auto* ring = std::get_if<MicroringSpec>(&device)) {
    os << "microring radius=" << format_value(ring->radius_m * 1e6)
       << " um, n_eff=" << format_value(ring->n_eff)
       << ", kappa1=" << format_value(ring->kappa1)
       << ", kappa2=" << format_value(ring->kappa2)
       << ", alpha=" << format_value(ring->alpha_per_m) << " /m";
  } else if (const auto* fp = std::get_if<FabryPerotSpec>(&device)) {
    os << "fabry_perot length=" << format_value(fp->length_m * 1e6)
       << " um, n=" << format_value(fp->refractive_index)
       << ", mirror_reflectance=" << format_value(fp->mirror_reflectance);
  } else if (const auto* grating = std::get_if<GratingSpec>(&device)) {
    os << "grating order=" << grating->order << ", lines=" << grating->lines;
  } else {
    const auto& awg = std::get<AwgSpec>(device);
    os << "awg arms=" << awg.arms << ", delta_length="
       << format_value(awg.delta_length_m * 1e6)
       << " um, n_eff=" << format_value(awg.n_eff);
  }
  return os.str();
}

double round_trip_amplitude(const MicroringSpec& ring) {
  ring.validate();
  return std::exp(-ring.alpha_per_m * kPi * ring.radius_m);
}

double round_trip_loss(const MicroringSpec& ring) {
  const double a = round_trip_amplitude(ring);
  return 1.0 - a * a * (1.0 - ring.kappa1) * (1.0 - ring.kappa2);
}

double microring_fsr(const MicroringSpec& ring, double wavelength_m) {
  ring.validate();
  require(finite_positive(wavelength_m), "wavelength must be positive");
  return wavelength_m * wavelength_m /
         (2.0 * kPi * ring.radius_m * ring.n_eff);
}

namespace detail {

double airy_finesse_exact(double x) {
  // Half width of 1/(1 + 4x/(1-x)^2 * sin^2(phi/2)) reaches the half maximum
  // at sin(phi/2) = (1-x)/(2*sqrt(x)); finesse is pi over the full width.
  constexpr double kMinX = 3.0 - 2.0 * 1.4142135623730951;
  if (!(x > kMinX) || !(x < 1.0)) {
    throw std::domain_error(
        "loop amplitude outside (3 - 2*sqrt(2), 1): linewidth undefined");
  }
  const double arg = (1.0 - x) / (2.0 * std::sqrt(x));
  return kPi / (2.0 * std::asin(arg));
}

double airy_finesse_approximation(double x) {
  if (!(x > 0.0) || !(x < 1.0)) {
    throw std::domain_error("loop amplitude outside (0, 1)");
  }
  return kPi * std::sqrt(x) / (1.0 - x);
}

RingPortResponse ring_response(const MicroringSpec& ring, double wavelength_m) {
  const double t1 = std::sqrt(1.0 - ring.kappa1);
  const double t2 = std::sqrt(1.0 - ring.kappa2);
  const double a = std::exp(-ring.alpha_per_m * kPi * ring.radius_m);
  const double phase =
      2.0 * kPi * ring.n_eff * (2.0 * kPi * ring.radius_m) / wavelength_m;
  const double s = std::sin(0.5 * phase);
  const double sin2 = s * s;

  // Shared-term form of the Airy fractions: the 4*p*sin2 term appears
  // identically in numerator and denominator, which keeps the through/drop
  // split power-conserving to rounding even at high finesse.
  const double p = t1 * t2 * a;
  const double cross = 4.0 * p * sin2;
  const double denom = (1.0 - p) * (1.0 - p) + cross;

  RingPortResponse out;
  out.through = ((t2 * a - t1) * (t2 * a - t1) + cross) / denom;
  out.drop = ring.kappa1 * ring.kappa2 * a / denom;
  return out;
}

double fp_response(const FabryPerotSpec& cavity, double wavelength_m) {
  const double r = cavity.mirror_reflectance;
  const double coeff = 4.0 * r / ((1.0 - r) * (1.0 - r));
  const double phase = 2.0 * kPi * cavity.refractive_index *
                       cavity.length_m / wavelength_m;
  const double s = std::sin(phase);
  return 1.0 / (1.0 + coeff * s * s);
}

}  // namespace detail

double microring_closed_form_finesse(const MicroringSpec& ring) {
  ring.validate();
  const double t1 = std::sqrt(1.0 - ring.kappa1);
  const double t2 = std::sqrt(1.0 - ring.kappa2);
  return detail::airy_finesse_exact(t1 * t2 * round_trip_amplitude(ring));
}

double microring_finesse_approximation(const MicroringSpec& ring) {
  ring.validate();
  const double t1 = std::sqrt(1.0 - ring.kappa1);
  const double t2 = std::sqrt(1.0 - ring.kappa2);
  return detail::airy_finesse_approximation(t1 * t2 * round_trip_amplitude(ring));
}

namespace {

template <typename Response>
Spectrum sampled_spectrum(const WavelengthGrid& grid, Response&& response) {
  Spectrum out;
  out.wavelength_m = grid.sample();
  out.transmission.resize(out.wavelength_m.size());
  for (std::size_t i = 0; i < out.wavelength_m.size(); ++i) {
    out.transmission[i] = response(out.wavelength_m[i]);
  }
  return out;
}

}  // namespace

Spectrum microring_through_spectrum(const MicroringSpec& ring,
                                    const WavelengthGrid& grid) {
  ring.validate();
  return sampled_spectrum(grid, [&](double lambda) {
    return detail::ring_response(ring, lambda).through;
  });
}

Spectrum microring_drop_spectrum(const MicroringSpec& ring,
                                 const WavelengthGrid& grid) {
  ring.validate();
  return sampled_spectrum(grid, [&](double lambda) {
    return detail::ring_response(ring, lambda).drop;
  });
}

Spectrum fabry_perot_spectrum(const FabryPerotSpec& cavity,
                              const WavelengthGrid& grid) {
  cavity.validate();
  return sampled_spectrum(grid, [&](double lambda) {
    return detail::fp_response(cavity, lambda);
  });
}

double device_footprint(const DeviceSpec& device) {
  if (const auto* ring = std::get_if<MicroringSpec>(&device)) {
    ring->validate();
    const double side = 2.0 * ring->radius_m + 2.0 * ring->margin_m;
    return side * side;
  }
  if (const auto* fp = std::get_if<FabryPerotSpec>(&device)) {
    fp->validate();
    return fp->length_m * fp->aperture_m;
  }
  if (const auto* grating = std::get_if<GratingSpec>(&device)) {
    grating->validate();
    require(grating->pitch_m > 0.0 && grating->length_m > 0.0,
            "grating footprint needs explicit pitch and length");
    return static_cast<double>(grating->lines) * grating->pitch_m *
           grating->length_m;
  }
  const auto& awg = std::get<AwgSpec>(device);
  awg.validate();
  require(awg.pitch_m > 0.0 && awg.length_m > 0.0,
          "awg footprint needs explicit pitch and length");
  return static_cast<double>(awg.arms) * awg.pitch_m * awg.length_m;
}

namespace {

double points_per_width(double width_m, const WavelengthGrid& grid) {
  return width_m / grid.step();
}

}  // namespace

double estimated_points_per_fwhm(const MicroringSpec& ring,
                                 const WavelengthGrid& grid) {
  ring.validate();
  grid.validate();
  const double mid = 0.5 * (grid.start_m + grid.stop_m);
  const double fsr = microring_fsr(ring, mid);
  double width;
  try {
    width = fsr / microring_closed_form_finesse(ring);
  } catch (const std::domain_error&) {
    width = fsr;  // broader than the spacing: sampling is never the problem
  }
  return points_per_width(width, grid);
}

double estimated_points_per_fwhm(const FabryPerotSpec& cavity,
                                 const WavelengthGrid& grid) {
  cavity.validate();
  grid.validate();
  const double mid = 0.5 * (grid.start_m + grid.stop_m);
  const double fsr = mid * mid / (2.0 * cavity.refractive_index * cavity.length_m);
  double width;
  try {
    width = fsr / detail::airy_finesse_exact(cavity.mirror_reflectance);
  } catch (const std::domain_error&) {
    width = fsr;
  }
  return points_per_width(width, grid);
}

}  // namespace wavesel
