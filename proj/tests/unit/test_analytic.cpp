#include <catch2/catch.hpp>

#include "tgotto/analytic.hpp"

using namespace tgotto;
using namespace tgotto::analytic;

TEST_CASE("closed-form cycle reproduces the ratio formula") {
  // theta from 1 to 5 keeps coth(theta) - 1 well above rounding.
  for (int n : {2, 7, 30, 100, 1000}) {
    for (double vf : {25.0, 64.0, 200.0, 500.0}) {
      for (double theta : {1.0, 1.7, 2.5, 3.6, 5.0}) {
        const double th = std::sqrt(vf) / theta;
        const RatioApproximation a = ratio_approximation(n, vf, th);
        REQUIRE(a.valid);
        const CycleRecord many = closed_form_cycle(n, vf, th);
        const CycleRecord single = closed_form_cycle(1, vf, th);
        const RatioRecord r = performance_ratios(many, single, n);
        REQUIRE(r.defined);
        REQUIRE(r.eta_star == Approx(a.value).epsilon(1e-9));
        REQUIRE(r.power_star == Approx(a.value).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("ratio formula values") {
  CHECK(ratio_approximation(1, 200.0, 5.0).value == 1.0);
  const RatioApproximation a = ratio_approximation(100, 200.0, 5.0);
  CHECK(a.valid);
  CHECK(a.in_regime);
  CHECK(a.value == Approx(1.0408).epsilon(1e-4));
  CHECK(a.value == Approx(1.04078480).epsilon(1e-7));

  // Thermodynamic, zero-temperature limit: 1 + 1/(Delta - 3).
  const double gap = 2.0 * std::sqrt(50.0) - 1.0;
  CHECK(ratio_approximation(1000000, 50.0, 1e-3).value == Approx(1.0 + 1.0 / (gap - 3.0)).epsilon(1e-6));
  CHECK(ratio_approximation(1000000, 4.5, 1e-3).value > 1.0);
}

TEST_CASE("ratio formula outside its validity is flagged") {
  const RatioApproximation a = ratio_approximation(10, 4.0, 0.5);
  CHECK_FALSE(a.valid);
  CHECK(std::isnan(a.value));
  CHECK_FALSE(ratio_approximation(10, 10.0, 5.0).in_regime);
}

TEST_CASE("ratio formula decreases with depth in deep lattices") {
  double last = 1e9;
  for (double vf = 25.0; vf <= 800.0; vf *= 1.5) {
    const double r = ratio_approximation(50, vf, 1.0).value;
    REQUIRE(r < last);
    last = r;
  }
}

TEST_CASE("site energies") {
  CHECK(site_energy(0, 49.0) == Approx(7.0 - 0.25));
  CHECK(site_energy(1, 25.0) - site_energy(0, 25.0) == Approx(9.0));
  CHECK(site_energy(0, 100.0) == Approx(9.75));
  // Single well numerical ground state.
  const Spectrum s = solve_spectrum(SystemConfig::single_well(recommended_basis_multiplier(100.0)), 100.0);
  CHECK(s.energies(0) == Approx(9.75).epsilon(0.02));
  CHECK_THROWS_AS(site_energy(-1, 1.0), ConfigError);
}

TEST_CASE("closed-form energies at the documented limits") {
  CHECK(mb_energies(1, 100.0, 2.0).cold_initial == Approx(1.0));
  CHECK(sqhe_energies(100.0, 2.0).cold_initial == 1.0);
  const CycleEnergies cold = mb_energies(20, 100.0, 1e-3);
  CHECK(cold.hot_final == Approx(20.0 * (10.0 - 0.25)));
  CHECK(sqhe_energies(100.0, 1e-3).hot_initial == Approx(1.0));
  // Zero temperature: hot side equals cold side.
  CHECK(cold.hot_initial == Approx(cold.cold_initial));
}

TEST_CASE("band box energy sums the box levels of one band") {
  for (int n : {1, 3, 17}) {
    for (int band : {0, 1, 4}) {
      double sum = 0.0;
      for (int k = band * n + 1; k <= (band + 1) * n; ++k) sum += static_cast<double>(k) * k / (static_cast<double>(n) * n);
      CHECK(band_box_energy(band, n) == Approx(sum).epsilon(1e-13));
    }
  }
}

TEST_CASE("double filling limit") {
  CHECK(double_filling_ratio(25.0) == Approx(0.75));
  CHECK(double_filling_ratio(9.0) == Approx(0.0).margin(1e-15));
  for (double vf : {5.0, 10.0, 50.0, 500.0}) CHECK(double_filling_ratio(vf) < 1.0);
  CHECK_THROWS_AS(double_filling_ratio(4.0), std::domain_error);
}

TEST_CASE("corrected partition function") {
  const double theta = std::sqrt(25.0) / 5.0;
  CHECK(alt_partition_correction(25.0, 5.0) > harmonic_partition(theta));
  // Correction vanishes as V_f grows at fixed theta.
  const double vf = 1e10;
  const double th = std::sqrt(vf) / 2.0;
  CHECK(alt_partition_correction(vf, th) == Approx(harmonic_partition(2.0)).epsilon(1e-4));
  for (double t : {0.3, 1.0, 7.0})
    CHECK(alt_partition_correction(36.0, t) > harmonic_partition(6.0 / t));
}

TEST_CASE("zero temperature closed forms match the numerical cold strokes") {
  const int n = 50;
  const auto c = SystemConfig::make(n, n, recommended_basis_multiplier(200.0));
  const CycleRecord num = adiabatic_cycle(c, CycleParams{0.0, 200.0, 0.0, 5.0});
  const CycleEnergies cf = mb_energies(n, 200.0, 5.0);
  CHECK(num.energies.cold_initial == Approx(cf.cold_initial).epsilon(1e-12));
  CHECK(num.energies.cold_final == Approx(cf.cold_final).epsilon(0.01));
}

TEST_CASE("regime flags") {
  const auto p = DeepLatticeParams::make(10, 100.0, 5.0);
  CHECK(p.deep);
  CHECK(p.cold);
  CHECK(p.gap == 19.0);
  CHECK(p.theta == 2.0);
  CHECK_FALSE(DeepLatticeParams::make(10, 100.0, 20.0).cold);
  CHECK_THROWS_AS(DeepLatticeParams::make(10, 0.0, 1.0), ConfigError);
}
