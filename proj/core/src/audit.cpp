#include "wavesel/audit.hpp"

#include <stdexcept>

#include "wavesel/constants.hpp"
#include "wavesel/physics.hpp"

namespace wavesel {

namespace {

constexpr double kVerdictSlack = 1e-6;

double resonator_finesse(const SpectralMetrics& metrics) {
  if (!metrics.finesse.has_value()) {
    throw std::invalid_argument(
        "resonator audit needs a measured finesse (at least two features)");
  }
  return *metrics.finesse;
}

}  // namespace

double device_delta_t(const DeviceSpec& device, double wavelength_m,
                      const SpectralMetrics& metrics) {
  if (!(wavelength_m > 0.0)) {
    throw std::invalid_argument("wavelength must be positive");
  }
  if (const auto* ring = std::get_if<MicroringSpec>(&device)) {
    ring->validate();
    // finesse/(2*pi) round trips of circumference 2*pi*R at index n_eff.
    const double finesse = resonator_finesse(metrics);
    const double path = roundtrips_from_finesse(finesse) * 2.0 * kPi *
                        ring->radius_m * ring->n_eff;
    return path / kSpeedOfLight;
  }
  if (const auto* fp = std::get_if<FabryPerotSpec>(&device)) {
    fp->validate();
    return fp_time_uncertainty(resonator_finesse(metrics),
                               fp->refractive_index, fp->length_m);
  }
  if (const auto* grating = std::get_if<GratingSpec>(&device)) {
    grating->validate();
    // The outermost rays differ by order*lines wavelengths of path.
    return grating_resolvance(grating->order, grating->lines) * wavelength_m /
           kSpeedOfLight;
  }
  const auto& awg = std::get<AwgSpec>(device);
  awg.validate();
  return static_cast<double>(awg.arms - 1) * awg.delta_length_m * awg.n_eff /
         kSpeedOfLight;
}

HupReport audit_device(const DeviceSpec& device, const SpectralMetrics& metrics,
                       double wavelength_m) {
  HupReport report;
  report.device_summary = describe(device);
  report.wavelength_m = wavelength_m;
  report.delta_t_s = device_delta_t(device, wavelength_m, metrics);
  report.delta_l_m = coherence_length(report.delta_t_s);
  report.min_uncertainty_bound_m =
      hup_min_linewidth(wavelength_m, report.delta_t_s);
  report.resonator_bound_m =
      resonator_linewidth_bound(wavelength_m, report.delta_t_s);

  if (std::holds_alternative<GratingSpec>(device)) {
    const auto& grating = std::get<GratingSpec>(device);
    report.linewidth_m =
        wavelength_m / grating_resolvance(grating.order, grating.lines);
  } else if (std::holds_alternative<AwgSpec>(device)) {
    const auto& awg = std::get<AwgSpec>(device);
    report.linewidth_m =
        wavelength_m / awg_resolvance(awg.arms, awg.delta_length_m, awg.n_eff,
                                      wavelength_m);
  } else {
    if (!(metrics.median_fwhm_m > 0.0)) {
      throw std::invalid_argument("resonator audit needs a measured linewidth");
    }
    report.linewidth_m = metrics.median_fwhm_m;
  }

  report.ratio_min_uncertainty =
      report.linewidth_m / report.min_uncertainty_bound_m;
  report.ratio_resonator = report.linewidth_m / report.resonator_bound_m;
  report.pass = report.linewidth_m >=
                report.min_uncertainty_bound_m * (1.0 - kVerdictSlack);
  return report;
}

}  // namespace wavesel
