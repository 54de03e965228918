#pragma once

// Closed forms for the deep-lattice (V_f >> 1), low-temperature (theta > 1)
// regime: anharmonic site energies, harmonic partition function, band-resolved
// box energies and the resulting many-body/single-particle ratios. Used as
// independent oracles for the numerical pipeline.

#include <cmath>
#include <stdexcept>
#include <string>

#include "tgotto/otto.hpp"

namespace tgotto::analytic {

struct DeepLatticeParams {
  double v_final = 0.0;
  double t_hot = 0.0;
  int particles = 1;
  double theta = 0.0;  // sqrt(V_f) / T_H
  double gap = 0.0;    // 2 sqrt(V_f) - 1
  bool deep = false;   // V_f >= deep_threshold
  bool cold = false;   // theta > 1

  static DeepLatticeParams make(int particles, double v_final, double t_hot, double deep_threshold = 25.0) {
    if (!(v_final > 0.0)) throw ConfigError("closed forms need V_f > 0");
    if (!(t_hot > 0.0)) throw ConfigError("closed forms need T_H > 0");
    if (particles < 1) throw ConfigError("particle number must be positive");
    DeepLatticeParams p;
    p.v_final = v_final;
    p.t_hot = t_hot;
    p.particles = particles;
    p.theta = std::sqrt(v_final) / t_hot;
    p.gap = 2.0 * std::sqrt(v_final) - 1.0;
    p.deep = v_final >= deep_threshold;
    p.cold = p.theta > 1.0;
    return p;
  }
  bool in_regime() const { return deep && cold; }
};

inline double coth(double x) { return 1.0 / std::tanh(x); }
inline double csch(double x) { return 1.0 / std::sinh(x); }

/// Level n of one deep well with the quartic term treated to first order.
inline double site_energy(int n, double v_final) {
  if (n < 0) throw ConfigError("level index must be non-negative");
  if (!(v_final > 0.0)) throw ConfigError("site energy needs V_f > 0");
  const double k = n + 1.0;
  return (n + 0.5) * 2.0 * std::sqrt(v_final) + 0.25 * (2.0 * k - 2.0 * k * k - 1.0);
}

inline double harmonic_partition(double theta) { return csch(theta) / 2.0; }

/// Partition function built from the anharmonic site energies.
inline double alt_partition_correction(double v_final, double t_hot) {
  if (!(v_final > 0.0) || !(t_hot > 0.0)) throw ConfigError("need V_f > 0 and T_H > 0");
  const double th = std::sqrt(v_final) / t_hot;
  const double c = coth(th);
  return csch(th) / 2.0 + th * c * c * csch(th) / (8.0 * std::sqrt(v_final));
}

/// Unit-filling many-body energies at the four cycle corners.
inline CycleEnergies mb_energies(int particles, double v_final, double t_hot) {
  const auto p = DeepLatticeParams::make(particles, v_final, t_hot);
  const double n = particles;
  const double c = coth(p.theta);
  const double s = csch(p.theta);
  const double root = std::sqrt(v_final);
  CycleEnergies e;
  e.cold_initial = (n + 1.0) * (2.0 * n + 1.0) / (6.0 * n);
  e.cold_final = n * (root - 0.25);
  e.hot_final = n * (root * c - 0.25 * c * c);
  e.hot_initial = (1.0 + 2.0 * n * n + 3.0 * n * c + 3.0 * n * n * s * s) / (6.0 * n);
  return e;
}

/// Total energy of band m of an N-particle box (each band holds N levels).
inline double band_box_energy(int band, int particles) {
  const double m = band;
  const double n = particles;
  return (1.0 + 3.0 * n * (2.0 * m + 1.0) + 2.0 * n * n * (3.0 * m * m + 3.0 * m + 1.0)) / (6.0 * n);
}

/// Single-particle (one-well) energies at the four cycle corners.
inline CycleEnergies sqhe_energies(double v_final, double t_hot) {
  const auto p = DeepLatticeParams::make(1, v_final, t_hot);
  const double c = coth(p.theta);
  const double root = std::sqrt(v_final);
  CycleEnergies e;
  e.cold_initial = 1.0;
  e.cold_final = root - 0.25;
  e.hot_final = root * c - 0.25 * c * c;
  e.hot_initial = 0.5 * c * (1.0 + c);
  return e;
}

struct RatioApproximation {
  double value = kNaN;
  bool valid = false;      // denominator positive
  bool in_regime = false;  // deep and cold
};

/// 1 + (1 - 1/N) / (gap - 3/2 [coth(theta) + 1]).
inline RatioApproximation ratio_approximation(int particles, double v_final, double t_hot) {
  const auto p = DeepLatticeParams::make(particles, v_final, t_hot);
  RatioApproximation r;
  r.in_regime = p.in_regime();
  const double denom = p.gap - 1.5 * (coth(p.theta) + 1.0);
  if (denom <= 0.0) return r;
  r.valid = true;
  r.value = 1.0 + (1.0 - 1.0 / particles) / denom;
  return r;
}

/// eta(2M)/eta(1) in the limit theta, M -> infinity.
inline double double_filling_ratio(double v_final) {
  if (!(v_final >= 0.0)) throw ConfigError("V_f must be non-negative");
  const double gap = 2.0 * std::sqrt(v_final) - 1.0;
  if (gap <= 3.0) throw std::domain_error("double-filling limit needs a gap above 3 (V_f > 4)");
  return (1.0 - 4.0 / (gap - 1.0)) / (1.0 - 3.0 / gap);
}

/// Closed-form cycles, many-body and single-particle, assembled like numerical ones.
inline CycleRecord closed_form_cycle(int particles, double v_final, double t_hot) {
  CycleParams p;
  p.v_initial = 0.0;
  p.v_final = v_final;
  p.t_cold = 0.0;
  p.t_hot = t_hot;
  const CycleEnergies e = particles == 1 ? sqhe_energies(v_final, t_hot) : mb_energies(particles, v_final, t_hot);
  return assemble_cycle(particles, particles, p, e, p.tau_nominal, CycleMode::Adiabatic);
}

}  // namespace tgotto::analytic
