#include <catch2/catch.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <random>

#include "tgotto/spectral.hpp"

using namespace tgotto;

namespace {

double mode(const SystemConfig& c, int n, double x) {
  const double l = c.box_length();
  return std::sqrt(2.0 / l) * std::sin(n * kPi * (x + l / 2.0) / l);
}

// Composite Gauss-Legendre over K equal pieces of the box.
template <typename F>
double box_integral(const SystemConfig& c, F f) {
  const double l = c.box_length();
  const int pieces = c.basis_size;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double a = -l / 2.0 + l * p / pieces;
    const double b = a + l / pieces;
    sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
  }
  return sum;
}

}  // namespace

TEST_CASE("lattice matrix elements match quadrature") {
  for (int wells : {1, 2, 3, 10}) {
    SystemConfig c{wells, 1, 64};
    const Eigen::MatrixXd p = potential_matrix(c);
    double worst = 0.0;
    for (int m = 1; m <= c.basis_size; ++m) {
      for (int n = m; n <= c.basis_size; ++n) {
        const double q = box_integral(c, [&](double x) {
          const double v = std::cos(x + c.phase());
          return mode(c, m, x) * v * v * mode(c, n, x);
        });
        worst = std::max(worst, std::abs(q - p(m - 1, n - 1)));
      }
    }
    INFO("M = " << wells);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("position squared matrix matches quadrature") {
  for (int wells : {1, 3}) {
    SystemConfig c{wells, 1, 24};
    const Eigen::MatrixXd x2 = position_squared_matrix(c);
    for (int m = 1; m <= c.basis_size; ++m)
      for (int n = 1; n <= c.basis_size; ++n) {
        const double q = box_integral(c, [&](double x) { return mode(c, m, x) * x * x * mode(c, n, x); });
        REQUIRE(x2(m - 1, n - 1) == Approx(q).margin(1e-11));
      }
  }
}

TEST_CASE("free box spectrum is (n/M)^2") {
  const auto c = SystemConfig::make(7, 7, 8);
  const Spectrum s = solve_spectrum(c, 0.0);
  for (int n = 0; n < s.size(); ++n) {
    const double q = (n + 1.0) / 7.0;
    CHECK(s.energies(n) == Approx(q * q).margin(1e-12));
  }
}

TEST_CASE("sector solver agrees with the dense route") {
  for (int wells : {1, 2, 5}) {
    const auto c = SystemConfig::make(wells, wells, 12);
    for (double v : {0.0, 0.7, 25.0}) {
      const Spectrum sec = solve_spectrum(c, v, SpectrumContent::WithVectors);
      const Spectrum dense = diagonalize(hamiltonian(c, v), c.basis_size);
      for (int n = 0; n < c.basis_size; ++n) REQUIRE(sec.energies(n) == Approx(dense.energies(n)).margin(1e-10));
      // Lowest band plus gap: nondegenerate for V > 0, so vectors agree up to sign.
      if (v > 0.0) {
        for (int n = 0; n < 2 * wells; ++n) {
          const double overlap = std::abs(sec.eigenvectors.col(n).dot(dense.eigenvectors.col(n)));
          REQUIRE(overlap == Approx(1.0).margin(1e-9));
        }
      }
    }
  }
}

TEST_CASE("eigenvectors are orthonormal and sign fixed") {
  const auto c = SystemConfig::make(4, 4, 10);
  const Spectrum s = solve_spectrum(c, 13.0, SpectrumContent::WithVectors);
  const Eigen::MatrixXd g = s.eigenvectors.transpose() * s.eigenvectors;
  CHECK((g - Eigen::MatrixXd::Identity(c.basis_size, c.basis_size)).cwiseAbs().maxCoeff() < 1e-12);
  for (int n = 0; n < s.size(); ++n) {
    for (int r = 0; r < c.basis_size; ++r) {
      if (std::abs(s.eigenvectors(r, n)) > 1e-8) {
        REQUIRE(s.eigenvectors(r, n) > 0.0);
        break;
      }
    }
  }
  const Eigen::MatrixXd h = hamiltonian(c, 13.0);
  const Eigen::MatrixXd resid = h * s.eigenvectors - s.eigenvectors * s.energies.asDiagonal();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("energies rise with depth at the Hellmann-Feynman rate") {
  const auto c = SystemConfig::make(3, 3, 12);
  const Eigen::MatrixXd p = potential_matrix(c);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> depth(0.5, 60.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double v = depth(rng);
    const double h = 1e-5;
    const Spectrum s = solve_spectrum(c, v, SpectrumContent::WithVectors);
    const Spectrum up = solve_spectrum(c, v + h);
    const Spectrum dn = solve_spectrum(c, v - h);
    for (int n = 0; n < 6; ++n) {
      const double slope = (up.energies(n) - dn.energies(n)) / (2.0 * h);
      const double expect = s.eigenvectors.col(n).dot(p * s.eigenvectors.col(n));
      REQUIRE(slope == Approx(expect).margin(1e-6));
      REQUIRE(slope >= 0.0);
    }
  }
}

TEST_CASE("enlarging the basis never raises an eigenvalue") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> depth(0.0, 150.0);
  for (int trial = 0; trial < 8; ++trial) {
    const double v = depth(rng);
    const auto small = SystemConfig::make(4, 4, 6);
    const auto large = SystemConfig::make(4, 4, 9);
    const Spectrum a = solve_spectrum(small, v);
    const Spectrum b = solve_spectrum(large, v);
    for (int n = 0; n < small.basis_size; ++n) REQUIRE(b.energies(n) <= a.energies(n) + 1e-10);
  }
}

TEST_CASE("band gap approaches the deep and shallow limits") {
  SECTION("deep lattice, 2 sqrt(V) - 1") {
    for (double v : {50.0, 100.0}) {
      const auto c = SystemConfig::make(20, 20, recommended_basis_multiplier(v));
      const double gap = band_gap(solve_spectrum(c, v), 20);
      CHECK(gap == Approx(2.0 * std::sqrt(v) - 1.0).epsilon(0.10));
    }
  }
  SECTION("shallow lattice, V / 2") {
    for (double v : {0.5, 1.0}) {
      const auto c = SystemConfig::make(20, 20, 8);
      const double gap = band_gap(solve_spectrum(c, v), 20);
      CHECK(gap == Approx(v / 2.0).epsilon(0.25));
    }
  }
  SECTION("free box has only the level spacing") {
    const auto c = SystemConfig::make(10, 10, 8);
    CHECK(band_gap(solve_spectrum(c, 0.0), 10) == Approx((121.0 - 100.0) / 100.0));
  }
}

TEST_CASE("recommended basis converges the two lowest bands") {
  for (double v : {5.0, 25.0, 100.0}) {
    const auto c = SystemConfig::make(6, 6, recommended_basis_multiplier(v));
    const ConvergenceReport r = convergence_report(c, v);
    INFO("V = " << v << " worst state " << r.worst_state);
    CHECK(r.max_relative_change < 1e-6);
    CHECK(r.doubled_basis_size == 2 * c.basis_size);
    CHECK(r.checked_states == 12);
  }
  CHECK(recommended_basis_multiplier(0.0) == 8);
  CHECK(recommended_basis_multiplier(25.0) == 12);
  CHECK(recommended_basis_multiplier(200.0) == 23);
}

TEST_CASE("sectors partition the basis") {
  const auto c = SystemConfig::make(5, 5, 8);
  const auto secs = sectors(c);
  CHECK(secs.size() == 6);
  std::vector<int> seen(c.basis_size, 0);
  for (const auto& s : secs)
    for (int i : s.members) ++seen[i];
  for (int count : seen) CHECK(count == 1);
  // Couplings never cross sectors.
  const Eigen::MatrixXd p = potential_matrix(c);
  std::vector<int> label(c.basis_size);
  for (const auto& s : secs)
    for (int i : s.members) label[i] = s.label;
  for (int i = 0; i < c.basis_size; ++i)
    for (int j = 0; j < c.basis_size; ++j)
      if (p(i, j) != 0.0) REQUIRE(label[i] == label[j]);
}

TEST_CASE("invalid spectral inputs are rejected") {
  CHECK_THROWS_AS(SystemConfig::make(0, 1, 8), ConfigError);
  CHECK_THROWS_AS(SystemConfig::make(4, 4, 3), ConfigError);
  CHECK_THROWS_AS(SystemConfig::make(1, 9, 8), ConfigError);
  const auto c = SystemConfig::make(2, 2, 8);
  CHECK_THROWS_AS(solve_spectrum(c, -1.0), ConfigError);
  CHECK_THROWS_AS(solve_spectrum(c, std::nan("")), ConfigError);
  CHECK_THROWS_AS(diagonalize(Eigen::MatrixXd::Identity(3, 3), 4), ConfigError);
  CHECK_THROWS_AS(band_gap(solve_spectrum(c, 1.0), 16), ConfigError);
}
