#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "support.hpp"
#include "wavesel/constants.hpp"
#include "wavesel/devices.hpp"

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

}  // namespace

TEST_CASE("round-trip amplitude and loss") {
  MicroringSpec ring = golden_ring();
  CHECK(round_trip_amplitude(ring) == doctest::Approx(0.999).epsilon(1e-12));

  ring.alpha_per_m = 0.0;
  CHECK(round_trip_amplitude(ring) == 1.0);
  CHECK(round_trip_loss(ring) ==
        doctest::Approx(1.0 - (1.0 - 0.0163) * (1.0 - 0.0163)).epsilon(1e-12));

  ring.kappa1 = ring.kappa2 = 1e-9;
  CHECK(round_trip_loss(ring) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("free spectral range of the ring") {
  CHECK(microring_fsr(golden_ring(), 1510e-9) ==
        doctest::Approx(8.0019670e-9).epsilon(1e-7));
  // Quadratic in wavelength.
  const double r = microring_fsr(golden_ring(), 1550e-9) /
                   microring_fsr(golden_ring(), 775e-9);
  CHECK(r == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("closed-form finesse, exact and approximate") {
  const MicroringSpec ring = golden_ring();
  CHECK(microring_closed_form_finesse(ring) ==
        doctest::Approx(180.1863).epsilon(1e-5));
  CHECK(microring_finesse_approximation(ring) ==
        doctest::Approx(180.1886).epsilon(1e-5));

  FabryPerotSpec cavity;
  const double exact = detail::airy_finesse_exact(cavity.mirror_reflectance);
  const double approx =
      detail::airy_finesse_approximation(cavity.mirror_reflectance);
  CHECK(exact == doctest::Approx(29.7900).epsilon(1e-4));
  CHECK(approx == doctest::Approx(29.8038).epsilon(1e-4));

  // The approximation converges onto the exact form as x -> 1.
  double prev = std::abs(detail::airy_finesse_approximation(0.7) /
                             detail::airy_finesse_exact(0.7) -
                         1.0);
  for (double x : {0.9, 0.99, 0.999}) {
    const double cur = std::abs(detail::airy_finesse_approximation(x) /
                                    detail::airy_finesse_exact(x) -
                                1.0);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("finesse domain edge") {
  const double edge = 3.0 - 2.0 * std::sqrt(2.0);
  CHECK_THROWS_AS(detail::airy_finesse_exact(edge), std::domain_error);
  CHECK_THROWS_AS(detail::airy_finesse_exact(edge * 0.5), std::domain_error);
  CHECK_THROWS_AS(detail::airy_finesse_exact(1.0), std::domain_error);
  CHECK_NOTHROW(detail::airy_finesse_exact(edge * 1.01));
  // Finesse 1 sits exactly at twice the spacing-to-width edge.
  CHECK(detail::airy_finesse_exact(testsup::x_for_finesse(2.0)) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("through and drop spectra around a resonance") {
  const MicroringSpec ring = golden_ring();
  WavelengthGrid grid;
  grid.start_m = 1507.4e-9;
  grid.stop_m = 1507.9e-9;
  grid.points = 5001;
  const Spectrum thru = microring_through_spectrum(ring, grid);
  const Spectrum drop = microring_drop_spectrum(ring, grid);
  REQUIRE(thru.size() == grid.points);
  REQUIRE(drop.size() == grid.points);

  double tmin = 1.0, dmax = 0.0;
  for (std::size_t i = 0; i < thru.size(); ++i) {
    tmin = std::min(tmin, thru.transmission[i]);
    dmax = std::max(dmax, drop.transmission[i]);
  }
  CHECK(tmin == doctest::Approx(0.003293).epsilon(2e-3));
  // kappa^2 * a / (1 - t^2 a)^2 at resonance.
  CHECK(dmax == doctest::Approx(0.8885).epsilon(1e-3));
  for (double t : thru.transmission) CHECK(t <= 1.0 + 1e-12);
  for (double t : drop.transmission) CHECK(t >= -1e-12);
}

TEST_CASE("lossless add-drop ring conserves power") {
  std::mt19937_64 rng(20210);
  for (int trial = 0; trial < 8; ++trial) {
    MicroringSpec ring;
    ring.radius_m = testsup::uniform(rng, 10e-6, 50e-6);
    ring.n_eff = testsup::uniform(rng, 1.5, 3.5);
    ring.kappa1 = testsup::uniform(rng, 0.02, 0.98);
    ring.kappa2 = testsup::uniform(rng, 0.02, 0.98);
    ring.alpha_per_m = 0.0;
    WavelengthGrid grid;
    grid.start_m = 1549e-9;
    grid.stop_m = 1551e-9;
    grid.points = 2001;
    const Spectrum thru = microring_through_spectrum(ring, grid);
    const Spectrum drop = microring_drop_spectrum(ring, grid);
    for (std::size_t i = 0; i < thru.size(); ++i) {
      CHECK(std::abs(thru.transmission[i] + drop.transmission[i] - 1.0) <=
            1e-12);
    }
  }
}

TEST_CASE("two-mirror cavity transmission peaks at unity") {
  FabryPerotSpec cavity;
  WavelengthGrid grid;
  grid.start_m = 1540e-9;
  grid.stop_m = 1560e-9;
  grid.points = 40001;
  const Spectrum s = fabry_perot_spectrum(cavity, grid);
  double mx = 0.0, mn = 1.0;
  for (double t : s.transmission) {
    mx = std::max(mx, t);
    mn = std::min(mn, t);
  }
  CHECK(mx == doctest::Approx(1.0).epsilon(1e-4));
  // Off resonance the Airy floor is 1/(1 + 4R/(1-R)^2).
  const double fc = 4.0 * 0.9 / (0.1 * 0.1);
  CHECK(mn == doctest::Approx(1.0 / (1.0 + fc)).epsilon(1e-3));
}

TEST_CASE("footprint estimates") {
  // (2R + 2*margin)^2 with the default 2.5 um margin.
  CHECK(device_footprint(golden_ring()) ==
        doctest::Approx(3.025e-9).epsilon(1e-12));
  CHECK(device_footprint(FabryPerotSpec{}) ==
        doctest::Approx(100e-6 * 10e-6).epsilon(1e-12));

  GratingSpec grating;
  grating.order = 2;
  grating.lines = 1000;
  CHECK_THROWS_AS(device_footprint(grating), std::invalid_argument);
  grating.pitch_m = 1e-6;
  grating.length_m = 5e-3;
  CHECK(device_footprint(grating) ==
        doctest::Approx(1000 * 1e-6 * 5e-3).epsilon(1e-12));

  AwgSpec awg;
  awg.arms = 101;
  awg.delta_length_m = 8.28e-5;
  CHECK_THROWS_AS(device_footprint(awg), std::invalid_argument);
  awg.pitch_m = 3e-6;
  awg.length_m = 2e-3;
  CHECK(device_footprint(awg) == doctest::Approx(101 * 3e-6 * 2e-3).epsilon(1e-12));
}

TEST_CASE("describe names every device") {
  CHECK(describe(golden_ring()).find("microring") != std::string::npos);
  CHECK(describe(FabryPerotSpec{}).find("fabry_perot") != std::string::npos);
  CHECK(describe(GratingSpec{}).find("grating") != std::string::npos);
  CHECK(describe(AwgSpec{}).find("awg") != std::string::npos);
}

TEST_CASE("sampling density estimate") {
  WavelengthGrid grid;
  grid.start_m = 1490e-9;
  grid.stop_m = 1526e-9;
  grid.points = 72001;
  const double per_fwhm = estimated_points_per_fwhm(golden_ring(), grid);
  CHECK(per_fwhm > 80.0);
  CHECK(per_fwhm < 95.0);

  grid.points = 721;
  CHECK(estimated_points_per_fwhm(golden_ring(), grid) < 2.0);

  FabryPerotSpec cavity;
  grid.start_m = 1540e-9;
  grid.stop_m = 1560e-9;
  grid.points = 40001;
  CHECK(estimated_points_per_fwhm(cavity, grid) > 10.0);
  // Over-coupled cavity has no sharp line; the estimate degrades to the
  // spacing but must not throw.
  cavity.mirror_reflectance = 0.05;
  CHECK_NOTHROW(estimated_points_per_fwhm(cavity, grid));
}

TEST_CASE("spec validation") {
  MicroringSpec ring = golden_ring();
  ring.kappa1 = 0.0;
  CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
  ring = golden_ring();
  ring.kappa2 = 1.0;
  CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
  ring = golden_ring();
  ring.n_eff = 0.9;
  CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
  ring = golden_ring();
  ring.radius_m = 0.0;
  CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
  ring = golden_ring();
  ring.alpha_per_m = -1.0;
  CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
  CHECK_NOTHROW(golden_ring().validate());

  FabryPerotSpec cavity;
  cavity.mirror_reflectance = 1.0;
  CHECK_THROWS_AS(cavity.validate(), std::invalid_argument);
  cavity = FabryPerotSpec{};
  cavity.mirror_reflectance = 0.0;
  CHECK_THROWS_AS(cavity.validate(), std::invalid_argument);
  cavity = FabryPerotSpec{};
  cavity.refractive_index = 0.5;
  CHECK_THROWS_AS(cavity.validate(), std::invalid_argument);
  CHECK_NOTHROW(FabryPerotSpec{}.validate());

  GratingSpec grating;
  grating.order = 0;
  CHECK_THROWS_AS(grating.validate(), std::invalid_argument);
  grating = GratingSpec{};
  grating.lines = 0;
  CHECK_THROWS_AS(grating.validate(), std::invalid_argument);

  AwgSpec awg;
  awg.arms = 1;
  awg.delta_length_m = 1e-5;
  CHECK_THROWS_AS(awg.validate(), std::invalid_argument);
}
