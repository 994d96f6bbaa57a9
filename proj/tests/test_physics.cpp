#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wavesel/constants.hpp"
#include "wavesel/physics.hpp"

using namespace wavesel;

TEST_CASE("angular frequency and photon energy at 1550 nm") {
  CHECK(angular_frequency(1550e-9) ==
        doctest::Approx(1.2152590757e15).epsilon(1e-9));
  CHECK(photon_energy(1550e-9) ==
        doctest::Approx(1.2815779724e-19).epsilon(1e-9));
  // E = hbar * omega ties the two together.
  CHECK(photon_energy(1550e-9) ==
        doctest::Approx(kReducedPlanck * angular_frequency(1550e-9))
            .epsilon(1e-14));
}

TEST_CASE("linewidth floors from a time spread") {
  const double bound = hup_min_linewidth(1510e-9, 2.75e-11);
  CHECK(bound == doctest::Approx(2.2008509618e-11).epsilon(1e-9));
  const double res = resonator_linewidth_bound(1510e-9, 2.75e-11);
  CHECK(res == doctest::Approx(4.4017019236e-11).epsilon(1e-9));
  // The resonator floor is exactly twice the minimum-uncertainty floor.
  CHECK(res == 2.0 * bound);
}

TEST_CASE("bound tightens as the time spread grows") {
  double prev = hup_min_linewidth(1550e-9, 1e-13);
  for (double dt = 1e-12; dt < 1e-9; dt *= 10.0) {
    const double cur = hup_min_linewidth(1550e-9, dt);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("coherence length is c times the time spread") {
  CHECK(coherence_length(1e-12) == doctest::Approx(2.99792458e-4).epsilon(1e-15));
  CHECK(coherence_length(2.75e-11) ==
        doctest::Approx(kSpeedOfLight * 2.75e-11).epsilon(1e-15));
}

TEST_CASE("cavity dwell time from finesse") {
  CHECK(fp_time_uncertainty(100.0, 1.5, 100e-6) ==
        doctest::Approx(1.5926512377e-11).epsilon(1e-9));
  CHECK(roundtrips_from_finesse(2.0 * kPi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(roundtrips_from_finesse(181.8) ==
        doctest::Approx(28.9343686541).epsilon(1e-9));
  CHECK(roundtrips_from_finesse(180.0) ==
        doctest::Approx(28.6478897565).epsilon(1e-9));
}

TEST_CASE("grating and waveguide-array resolvance") {
  CHECK(grating_resolvance(2, 1000) == 2000.0);
  CHECK(grating_resolvance(1, 1) == 1.0);
  // Smallest resolvable step at 1550 nm for order 2, 1000 lines.
  CHECK(1550e-9 / grating_resolvance(2, 1000) ==
        doctest::Approx(0.775e-9).epsilon(1e-12));
  const double resolvance = awg_resolvance(101, 8.2844827586206897e-5, 1.45, 1550e-9);
  CHECK(resolvance == doctest::Approx(7750.0).epsilon(1e-12));
}

TEST_CASE("spectral width conversion to angular frequency") {
  const double dl = 44e-12;
  const double dw = delta_omega_from_delta_lambda(dl, 1510e-9);
  CHECK(dw == doctest::Approx(2.0 * kPi * kSpeedOfLight * dl / (1510e-9 * 1510e-9))
                  .epsilon(1e-14));
}

TEST_CASE("uncertainty pair sits exactly on the product floor") {
  const UncertaintyPair pair = UncertaintyPair::from_time(2.75e-11, 1510e-9);
  CHECK(pair.delta_omega_rad_s * pair.delta_t_s ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pair.delta_l_m == doctest::Approx(coherence_length(2.75e-11)).epsilon(1e-15));
  CHECK(pair.delta_lambda_m ==
        doctest::Approx(hup_min_linewidth(1510e-9, 2.75e-11)).epsilon(1e-15));
}

TEST_CASE("photon state carries consistent frequency and energy") {
  const PhotonState photon = PhotonState::from_wavelength(1310e-9);
  CHECK(photon.wavelength_m == 1310e-9);
  CHECK(photon.angular_frequency_rad_s ==
        doctest::Approx(angular_frequency(1310e-9)).epsilon(1e-15));
  CHECK(photon.energy_j == doctest::Approx(photon_energy(1310e-9)).epsilon(1e-15));
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(angular_frequency(0.0), std::invalid_argument);
  CHECK_THROWS_AS(angular_frequency(-1e-9), std::invalid_argument);
  CHECK_THROWS_AS(photon_energy(0.0), std::invalid_argument);
  CHECK_THROWS_AS(hup_min_linewidth(1550e-9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hup_min_linewidth(0.0, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(resonator_linewidth_bound(1550e-9, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(coherence_length(0.0), std::invalid_argument);
  CHECK_THROWS_AS(fp_time_uncertainty(0.0, 1.5, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(fp_time_uncertainty(100.0, 0.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(fp_time_uncertainty(100.0, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(roundtrips_from_finesse(0.0), std::invalid_argument);
  CHECK_THROWS_AS(grating_resolvance(0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(grating_resolvance(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(awg_resolvance(1, 1e-5, 1.45, 1550e-9), std::invalid_argument);
  CHECK_THROWS_AS(awg_resolvance(101, 0.0, 1.45, 1550e-9), std::invalid_argument);
  CHECK_THROWS_AS(delta_omega_from_delta_lambda(0.0, 1550e-9),
                  std::invalid_argument);
  CHECK_THROWS_AS(delta_omega_from_delta_lambda(44e-12, 0.0),
                  std::invalid_argument);
}
