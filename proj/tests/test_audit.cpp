#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wavesel/audit.hpp"
#include "wavesel/constants.hpp"
#include "wavesel/physics.hpp"

using namespace wavesel;

namespace {

MicroringSpec golden_ring() {
  MicroringSpec ring;
  ring.radius_m = 25e-6;
  ring.n_eff = 1.814;
  ring.kappa1 = ring.kappa2 = 0.0163;
  ring.alpha_per_m = -std::log(0.999) / (kPi * 25e-6);
  return ring;
}

SpectralMetrics ring_metrics() {
  SpectralMetrics m;
  m.feature_count = 5;
  m.fsr_m = 8e-9;
  m.finesse = 181.8;
  m.median_fwhm_m = 44.269e-12;
  m.median_center_m = 1510e-9;
  m.q_factor = 34107.0;
  return m;
}

}  // namespace

TEST_CASE("microring storage time follows from the measured finesse") {
  const double dt = device_delta_t(golden_ring(), 1510e-9, ring_metrics());
  // m round trips of the 2*pi*R*n_eff optical circumference.
  const double expected = roundtrips_from_finesse(181.8) * 2.0 * kPi * 25e-6 *
                          1.814 / kSpeedOfLight;
  CHECK(dt == doctest::Approx(expected).epsilon(1e-12));
  CHECK(dt == doctest::Approx(2.750117e-11).epsilon(1e-6));
}

TEST_CASE("microring audit sits on the resonator bound") {
  const HupReport report =
      audit_device(golden_ring(), ring_metrics(), 1510e-9);
  CHECK(report.pass);
  CHECK(report.wavelength_m == 1510e-9);
  CHECK(report.delta_l_m ==
        doctest::Approx(report.delta_t_s * kSpeedOfLight).epsilon(1e-12));
  CHECK(report.resonator_bound_m ==
        doctest::Approx(2.0 * report.min_uncertainty_bound_m).epsilon(1e-15));
  CHECK(report.ratio_resonator == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(report.ratio_min_uncertainty == doctest::Approx(2.0).epsilon(2e-2));
  CHECK(report.linewidth_m == 44.269e-12);
  CHECK_FALSE(report.device_summary.empty());
}

TEST_CASE("two-mirror cavity audit uses the cavity dwell time") {
  FabryPerotSpec cavity;
  SpectralMetrics m;
  m.feature_count = 3;
  m.fsr_m = 8.01e-9;
  m.finesse = 29.79;
  m.median_fwhm_m = 8.01e-9 / 29.79;
  m.median_center_m = 1550e-9;
  const HupReport report = audit_device(cavity, m, 1550e-9);
  CHECK(report.delta_t_s ==
        doctest::Approx(fp_time_uncertainty(29.79, 1.5, 100e-6)).epsilon(1e-12));
  CHECK(report.pass);
  CHECK(report.ratio_min_uncertainty > 1.0);
}

TEST_CASE("dispersive devices audit their design linewidth at 4*pi") {
  GratingSpec grating;
  grating.order = 2;
  grating.lines = 1000;
  const HupReport g = audit_device(grating, SpectralMetrics{}, 1550e-9);
  // linewidth lambda/R against bound lambda/(4*pi*R): the ratio is exactly
  // 4*pi independent of the geometry.
  CHECK(g.ratio_min_uncertainty == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(g.pass);
  CHECK(g.delta_t_s ==
        doctest::Approx(2.0 * 1000.0 * 1550e-9 / kSpeedOfLight).epsilon(1e-12));

  AwgSpec awg;
  awg.arms = 101;
  awg.delta_length_m = 8.2844827586206897e-5;
  awg.n_eff = 1.45;
  const HupReport a = audit_device(awg, SpectralMetrics{}, 1550e-9);
  CHECK(a.ratio_min_uncertainty == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(a.pass);
  CHECK(a.linewidth_m == doctest::Approx(1550e-9 / 7750.0).epsilon(1e-9));
}

TEST_CASE("verdict boundary behaves as a one-sided floor") {
  // Fix the interaction time through the finesse, then place the measured
  // width just above and just below the floor.
  SpectralMetrics m = ring_metrics();
  const double dt = device_delta_t(golden_ring(), 1510e-9, m);
  const double floor = hup_min_linewidth(1510e-9, dt);

  m.median_fwhm_m = floor;
  CHECK(audit_device(golden_ring(), m, 1510e-9).pass);
  m.median_fwhm_m = floor * (1.0 + 1e-9);
  CHECK(audit_device(golden_ring(), m, 1510e-9).pass);
  // Inside the rounding slack of one part in 1e6.
  m.median_fwhm_m = floor * (1.0 - 5e-7);
  CHECK(audit_device(golden_ring(), m, 1510e-9).pass);
  m.median_fwhm_m = floor * (1.0 - 2e-6);
  CHECK_FALSE(audit_device(golden_ring(), m, 1510e-9).pass);
}

TEST_CASE("resonator audits need a measured finesse and width") {
  SpectralMetrics no_finesse;
  no_finesse.feature_count = 1;
  no_finesse.median_fwhm_m = 44e-12;
  no_finesse.median_center_m = 1510e-9;
  CHECK_THROWS_AS(audit_device(golden_ring(), no_finesse, 1510e-9),
                  std::invalid_argument);

  SpectralMetrics no_width = ring_metrics();
  no_width.median_fwhm_m = 0.0;
  CHECK_THROWS_AS(audit_device(golden_ring(), no_width, 1510e-9),
                  std::invalid_argument);

  CHECK_THROWS_AS(audit_device(golden_ring(), ring_metrics(), 0.0),
                  std::invalid_argument);
}
