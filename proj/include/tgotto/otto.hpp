#pragma once

// Quantum Otto cycle between two lattice depths V_i (cold side) and V_f (hot side):
// compression V_i -> V_f at T_C, hot thermalization at T_H, expansion
// V_f -> V_i, cold thermalization at T_C.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tgotto/error.hpp"
#include "tgotto/spectral.hpp"
#include "tgotto/thermo.hpp"

namespace tgotto {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class CycleMode { Adiabatic, FiniteTime, StaAveraged, StaTargeted };

inline std::string to_string(CycleMode m) {
  switch (m) {
    case CycleMode::Adiabatic: return "adiabatic";
    case CycleMode::FiniteTime: return "finite-time";
    case CycleMode::StaAveraged: return "sta-averaged";
    case CycleMode::StaTargeted: return "sta-targeted";
  }
  return "unknown";
}

struct CycleParams {
  double v_initial = 0.0;  // V_i
  double v_final = 0.0;    // V_f
  double t_cold = 0.0;     // T_C
  double t_hot = 1.0;      // T_H
  double tau_nominal = 1.0;  // cycle time used for adiabatic power
  Statistics statistics = Statistics::FermiDirac;

  void validate() const {
    require_depth(v_initial);
    require_depth(v_final);
    if (!(t_cold >= 0.0)) throw ConfigError("T_C must be non-negative");
    if (t_hot < t_cold) throw ConfigError("T_H must not be below T_C");
    if (!(tau_nominal > 0.0)) throw ConfigError("nominal cycle time must be positive");
  }
};

/// The four stroke-end energies <H_T(V)>.
struct CycleEnergies {
  double cold_initial = 0.0;  // <H_TC(V_i)>, thermal
  double cold_final = 0.0;    // <H_TC(V_f)>, after compression
  double hot_final = 0.0;     // <H_TH(V_f)>, thermal
  double hot_initial = 0.0;   // <H_TH(V_i)>, after expansion
};

struct CycleRecord {
  int particles = 0;
  int wells = 0;
  CycleParams params;
  CycleEnergies energies;
  double work_compression = 0.0;  // W_C
  double work_expansion = 0.0;    // W_H
  double heat_cold = 0.0;         // Q_C
  double heat_hot = 0.0;          // Q_H
  double work_extracted = 0.0;    // W_ext = -(W_C + W_H)
  double efficiency = kNaN;
  double power = kNaN;
  double duration = kNaN;  // tau, internal time units for finite-time cycles
  double ramp_time = kNaN; // t_f in units of 2 pi hbar / E_R, finite-time only
  CycleMode mode = CycleMode::Adiabatic;
  bool engine = false;

  double first_law_residual() const {
    return work_compression + heat_hot + work_expansion + heat_cold;
  }
};

/// Work, heat, efficiency and power from the four stroke-end energies.
inline CycleRecord assemble_cycle(int particles, int wells, const CycleParams& params,
                                  const CycleEnergies& e, double duration, CycleMode mode) {
  CycleRecord r;
  r.particles = particles;
  r.wells = wells;
  r.params = params;
  r.energies = e;
  r.mode = mode;
  r.duration = duration;
  r.work_compression = e.cold_final - e.cold_initial;
  r.work_expansion = e.hot_initial - e.hot_final;
  r.heat_hot = e.hot_final - e.cold_final;
  r.heat_cold = e.cold_initial - e.hot_initial;
  r.work_extracted = -(r.work_compression + r.work_expansion);
  r.efficiency = r.heat_hot > 0.0 ? r.work_extracted / r.heat_hot : kNaN;
  r.power = r.work_extracted / duration;
  r.engine = r.work_extracted > 0.0 && r.heat_hot > 0.0;
  return r;
}

/// Adiabatic cycle from precomputed spectra at V_i and V_f.
inline CycleRecord adiabatic_cycle(const Spectrum& at_initial, const Spectrum& at_final, int particles,
                                   int wells, const CycleParams& params) {
  params.validate();
  const Ensemble cold = thermal_ensemble(at_initial.energies, particles, params.t_cold, params.statistics);
  const Ensemble hot = thermal_ensemble(at_final.energies, particles, params.t_hot, params.statistics);
  CycleEnergies e;
  e.cold_initial = ensemble_energy(at_initial.energies, cold.occupations);
  e.cold_final = adiabatic_energy(cold.occupations, at_final.energies);
  e.hot_final = ensemble_energy(at_final.energies, hot.occupations);
  e.hot_initial = adiabatic_energy(hot.occupations, at_initial.energies);
  return assemble_cycle(particles, wells, params, e, params.tau_nominal, CycleMode::Adiabatic);
}

inline CycleRecord adiabatic_cycle(const SystemConfig& config, const CycleParams& params) {
  params.validate();
  const Spectrum si = solve_spectrum(config, params.v_initial);
  const Spectrum sf = solve_spectrum(config, params.v_final);
  return adiabatic_cycle(si, sf, config.particles, config.wells, params);
}

struct RatioRecord {
  int particles = 0;
  int wells = 0;
  CycleParams params;
  double eta_star = kNaN;
  double power_star = kNaN;
  double eta_many = kNaN;
  double eta_single = kNaN;
  bool engine = false;  // many-body cycle acts as an engine
  bool defined = false; // both cycles extract positive work
};

/// eta* = eta(N)/eta(1), P* = P(N)/(N P(1)).
inline RatioRecord performance_ratios(const CycleRecord& many, const CycleRecord& single, int particles) {
  RatioRecord r;
  r.particles = particles;
  r.wells = many.wells;
  r.params = many.params;
  r.eta_many = many.efficiency;
  r.eta_single = single.efficiency;
  r.engine = many.engine;
  r.defined = many.work_extracted > 0.0 && single.work_extracted > 0.0 && many.heat_hot > 0.0 &&
              single.heat_hot > 0.0;
  if (r.defined) {
    r.eta_star = many.efficiency / single.efficiency;
    r.power_star = many.power / (particles * single.power);
  }
  return r;
}

/// Spectra keyed by depth; sweeps reuse them across grid cells.
class SpectrumCache {
 public:
  explicit SpectrumCache(SystemConfig config) : config_(config) {}

  const Spectrum& at(double depth) {
    auto it = cache_.find(depth);
    if (it == cache_.end()) it = cache_.emplace(depth, solve_spectrum(config_, depth)).first;
    return it->second;
  }
  const SystemConfig& config() const { return config_; }

 private:
  SystemConfig config_;
  std::map<double, Spectrum> cache_;
};

/// One adiabatic cycle per particle number, same spectra throughout.
inline std::vector<CycleRecord> sweep_filling(const SystemConfig& config, const CycleParams& params,
                                              const std::vector<int>& particle_numbers) {
  params.validate();
  const Spectrum si = solve_spectrum(config, params.v_initial);
  const Spectrum sf = solve_spectrum(config, params.v_final);
  std::vector<CycleRecord> out;
  out.reserve(particle_numbers.size());
  for (int n : particle_numbers) {
    config.with_particles(n);  // validates N against the basis
    out.push_back(adiabatic_cycle(si, sf, n, config.wells, params));
  }
  return out;
}

/// Ratio grid over (V_i, V_f); cells with V_i > V_f come back flagged non-engine.
inline std::vector<RatioRecord> sweep_depths(const SystemConfig& config, const SystemConfig& single,
                                             const std::vector<double>& vi_grid,
                                             const std::vector<double>& vf_grid, const CycleParams& base) {
  SpectrumCache many_cache(config);
  SpectrumCache single_cache(single);
  std::vector<RatioRecord> out;
  out.reserve(vi_grid.size() * vf_grid.size());
  for (double vi : vi_grid) {
    for (double vf : vf_grid) {
      CycleParams p = base;
      p.v_initial = vi;
      p.v_final = vf;
      p.validate();
      const CycleRecord many =
          adiabatic_cycle(many_cache.at(vi), many_cache.at(vf), config.particles, config.wells, p);
      const CycleRecord one = adiabatic_cycle(single_cache.at(vi), single_cache.at(vf), 1, 1, p);
      out.push_back(performance_ratios(many, one, config.particles));
    }
  }
  return out;
}

struct MaxPowerResult {
  double eta_at_max_power = kNaN;
  double v_final_optimal = kNaN;
  double max_power = kNaN;
  double eta_curzon_ahlborn = kNaN;
  std::vector<double> grid;
};

inline double curzon_ahlborn(double t_cold, double t_hot) { return 1.0 - std::sqrt(t_cold / t_hot); }

/// Logarithmic grid of `count` points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return g;
}

/// Maximizes adiabatic power over V_f on a grid at fixed V_i.
inline MaxPowerResult efficiency_at_max_power(const SystemConfig& config, const CycleParams& base,
                                              std::vector<double> vf_grid = log_grid(1e-3, 500.0, 400)) {
  SpectrumCache cache(config);
  MaxPowerResult best;
  best.grid = vf_grid;
  best.eta_curzon_ahlborn = curzon_ahlborn(base.t_cold, base.t_hot);
  for (double vf : vf_grid) {
    CycleParams p = base;
    p.v_final = vf;
    p.validate();
    const CycleRecord r = adiabatic_cycle(cache.at(p.v_initial), cache.at(vf), config.particles, config.wells, p);
    if (!r.engine) continue;
    if (std::isnan(best.max_power) || r.power > best.max_power) {
      best.max_power = r.power;
      best.eta_at_max_power = r.efficiency;
      best.v_final_optimal = vf;
    }
  }
  if (std::isnan(best.max_power)) throw NumericalError("no engine operation anywhere on the V_f grid");
  return best;
}

}  // namespace tgotto
