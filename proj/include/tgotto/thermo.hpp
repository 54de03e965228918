#pragma once

// Occupation statistics of the mapped free-fermion gas.

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "tgotto/error.hpp"

namespace tgotto {

enum class Statistics {
  FermiDirac,  // grand-canonical free fermions (the hard-core boson gas)
  Boltzmann,   // N independent distinguishable particles, each canonical
};

struct Ensemble {
  double temperature = 0.0;
  double chemical_potential = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd occupations;
  int particles = 0;
  Statistics statistics = Statistics::FermiDirac;
};

/// [exp((E - mu)/T) + 1]^-1 without overflow for large |E - mu|/T.
inline double fermi_factor(double energy, double mu, double temperature) {
  const double x = (energy - mu) / temperature;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

/// Fermi-Dirac factors; at T = 0 the exact step (1/2 exactly at E = mu).
inline Eigen::VectorXd occupations(const Eigen::VectorXd& energies, double mu, double temperature) {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be non-negative");
  Eigen::VectorXd f(energies.size());
  for (Eigen::Index n = 0; n < energies.size(); ++n) {
    if (temperature == 0.0)
      f(n) = energies(n) < mu ? 1.0 : (energies(n) > mu ? 0.0 : 0.5);
    else
      f(n) = fermi_factor(energies(n), mu, temperature);
  }
  return f;
}

inline double occupation_sum(const Eigen::VectorXd& energies, double mu, double temperature) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < energies.size(); ++n) sum += fermi_factor(energies(n), mu, temperature);
  return sum;
}

/// Root of sum_n f_n(mu) = N in the bracket [E_0 - 50T, E_{K-1} + 50T].
inline double chemical_potential(const Eigen::VectorXd& energies, int particles, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("chemical potential needs T > 0");
  if (particles < 1) throw ConfigError("particle number must be positive");
  if (particles > energies.size())
    throw ConfigError("N = " + std::to_string(particles) + " exceeds the " +
                      std::to_string(energies.size()) + " available states");
  const double target = particles;
  auto residual = [&](double mu) { return occupation_sum(energies, mu, temperature) - target; };

  double lo = energies(0) - 50.0 * temperature;
  double hi = energies(energies.size() - 1) + 50.0 * temperature;
  double r_lo = residual(lo);
  double r_hi = residual(hi);
  if (particles == energies.size() && r_hi < 0.0) {
    // Completely filled basis: every factor tends to one, push the bracket up.
    for (int i = 0; i < 64 && r_hi < 0.0; ++i) {
      hi += 50.0 * temperature * (1 << std::min(i, 20));
      r_hi = residual(hi);
    }
  }
  if (!(r_lo < 0.0 && r_hi > 0.0)) {
    if (std::abs(r_hi) <= 1e-12) return hi;
    throw NumericalError("chemical potential bracket does not enclose the root");
  }

  std::uintmax_t max_iter = 500;
  const auto [a, b] = boost::math::tools::toms748_solve(
      residual, lo, hi, r_lo, r_hi, boost::math::tools::eps_tolerance<double>(53), max_iter);
  const double ra = std::abs(residual(a));
  const double rb = std::abs(residual(b));
  const double mu = ra <= rb ? a : b;
  if (std::min(ra, rb) > 1e-10 * std::max(1.0, target))
    throw NumericalError("chemical potential search stalled with residual " +
                         std::to_string(std::min(ra, rb)));
  return mu;
}

/// Equilibrium ensemble of N particles at temperature T over the given spectrum.
inline Ensemble thermal_ensemble(const Eigen::VectorXd& energies, int particles, double temperature,
                                 Statistics statistics = Statistics::FermiDirac) {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be non-negative");
  if (particles < 1 || (statistics == Statistics::FermiDirac && particles > energies.size()))
    throw ConfigError("cannot place " + std::to_string(particles) + " particles in " +
                      std::to_string(energies.size()) + " states");
  Ensemble e;
  e.temperature = temperature;
  e.particles = particles;
  e.statistics = statistics;
  e.occupations = Eigen::VectorXd::Zero(energies.size());

  if (statistics == Statistics::Boltzmann) {
    if (temperature == 0.0) {
      e.occupations(0) = particles;
      return e;
    }
    double z = 0.0;
    for (Eigen::Index n = 0; n < energies.size(); ++n) {
      e.occupations(n) = std::exp(-(energies(n) - energies(0)) / temperature);
      z += e.occupations(n);
    }
    e.occupations *= particles / z;
    return e;
  }

  if (temperature == 0.0) {
    e.occupations.head(particles).setOnes();
    if (particles < energies.size())
      e.chemical_potential = 0.5 * (energies(particles - 1) + energies(particles));
    return e;
  }
  e.chemical_potential = chemical_potential(energies, particles, temperature);
  e.occupations = occupations(energies, e.chemical_potential, temperature);
  return e;
}

inline double ensemble_energy(const Eigen::VectorXd& energies, const Eigen::VectorXd& f) {
  if (energies.size() != f.size()) throw ConfigError("energy and occupation lengths differ");
  return energies.dot(f);
}

/// Energy after an adiabatic stroke: occupations carried over by energy rank.
inline double adiabatic_energy(const Eigen::VectorXd& f_source, const Eigen::VectorXd& energies_target) {
  return ensemble_energy(energies_target, f_source);
}

inline double entropy(const Eigen::VectorXd& f) {
  auto xlogx = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };
  double s = 0.0;
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    if (f(n) < 0.0 || f(n) > 1.0) throw ConfigError("occupations must lie in [0, 1]");
    s -= xlogx(f(n)) + xlogx(1.0 - f(n));
  }
  return s;
}

}  // namespace tgotto
