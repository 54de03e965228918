#pragma once

// Finite-time unitary evolution of single-particle states through lattice ramps.
//
// H(t) = D + V(t) P keeps the sector structure of the sine basis, so every
// state is propagated inside its own sector with the exponential-midpoint rule
//   psi(t + dt) = exp(-i H(t + dt/2) dt) psi(t),
// which is exactly norm preserving and second order in dt. The number of steps
// is doubled until the final energies stop changing.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "tgotto/error.hpp"
#include "tgotto/otto.hpp"
#include "tgotto/ramp.hpp"
#include "tgotto/spectral.hpp"
#include "tgotto/thermo.hpp"

namespace tgotto {

struct StepControl {
  double initial_dt = 0.05;         // hbar / E_R
  double relative_tolerance = 1e-6; // on E_NA between successive halvings
  int max_refinements = 12;
  double max_norm_drift = 1e-8;
  int fixed_steps = 0;              // > 0: one run with exactly this many steps, no refinement
};

struct PropagationResult {
  std::vector<int> states;        // spectrum indices that were evolved
  Eigen::MatrixXcd final_states;  // sine-basis coefficients, one column per state
  Eigen::VectorXd e_na;           // <psi_n(t_f)| H(t_f) |psi_n(t_f)>
  Eigen::VectorXd e_ad;           // eigenvalue of the same rank at the final depth
  Eigen::VectorXd norm_drift;
  double gram_deviation = 0.0;    // max |<psi_m|psi_n> - delta_mn| over evolved states
  int steps = 0;
  double dt = 0.0;
  double refinement_change = kNaN;

  Eigen::VectorXd excess() const { return e_na - e_ad; }
  double max_norm_drift() const { return norm_drift.size() ? norm_drift.maxCoeff() : 0.0; }
};

inline std::vector<int> all_states(int count) {
  std::vector<int> s(count);
  for (int i = 0; i < count; ++i) s[i] = i;
  return s;
}

namespace detail {

struct SectorBatch {
  const SectorOperators* op = nullptr;
  std::vector<int> slots;   // positions in the result arrays
  Eigen::MatrixXd initial;  // local coefficients, one column per state
  Eigen::MatrixXd final_h;  // sector Hamiltonian at the final depth
};

struct RunOutput {
  Eigen::VectorXd e_na;
  std::vector<Eigen::MatrixXd> re;  // per batch
  std::vector<Eigen::MatrixXd> im;
};

inline RunOutput run_fixed(std::vector<SectorBatch>& batches, const Ramp& ramp, int steps, int n_states) {
  const double dt = ramp.duration() / steps;
  std::vector<double> v_mid(steps);
  for (int k = 0; k < steps; ++k) v_mid[k] = ramp.depth((k + 0.5) * dt);

  RunOutput out;
  out.e_na = Eigen::VectorXd::Zero(n_states);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (auto& batch : batches) {
    Eigen::MatrixXd re = batch.initial;
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
    Eigen::MatrixXd a, b;
    Eigen::ArrayXd c, s;
    double last_v = kNaN;
    for (int k = 0; k < steps; ++k) {
      if (v_mid[k] != last_v) {
        solver.compute(batch.op->kinetic + v_mid[k] * batch.op->potential);
        if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed during propagation");
        c = (solver.eigenvalues().array() * dt).cos();
        s = (solver.eigenvalues().array() * dt).sin();
        last_v = v_mid[k];
      }
      const Eigen::MatrixXd& q = solver.eigenvectors();
      a.noalias() = q.transpose() * re;
      b.noalias() = q.transpose() * im;
      // exp(-i lambda dt) (a + i b)
      const Eigen::MatrixXd na = (a.array().colwise() * c + b.array().colwise() * s).matrix();
      const Eigen::MatrixXd nb = (b.array().colwise() * c - a.array().colwise() * s).matrix();
      re.noalias() = q * na;
      im.noalias() = q * nb;
    }
    for (std::size_t j = 0; j < batch.slots.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      out.e_na(batch.slots[j]) = re.col(col).dot(batch.final_h * re.col(col)) +
                                 im.col(col).dot(batch.final_h * im.col(col));
    }
    out.re.push_back(std::move(re));
    out.im.push_back(std::move(im));
  }
  return out;
}

}  // namespace detail

/// Evolves the listed eigenstates of `start` through `ramp`; energies are
/// measured with the Hamiltonian at the ramp's nominal end depth, whose
/// spectrum is `end`.
inline PropagationResult evolve_states(const SystemConfig& config, const Ramp& ramp, const Spectrum& start,
                                       const Spectrum& end, const std::vector<int>& states,
                                       const StepControl& control = {}) {
  config.validate();
  if (!start.has_vectors() || start.sector.empty() || end.sector.empty())
    throw ConfigError("propagation needs sector-resolved spectra with eigenvectors");
  if (start.size() != config.basis_size || end.size() != config.basis_size)
    throw ConfigError("spectra do not match the basis size");

  const auto ops = sector_operators(config);
  std::map<int, std::size_t> op_index;
  for (std::size_t i = 0; i < ops.size(); ++i) op_index[ops[i].sector.label] = i;

  const int n_states = static_cast<int>(states.size());
  std::map<int, std::vector<int>> by_sector;  // label -> slots
  for (int slot = 0; slot < n_states; ++slot) {
    const int n = states[slot];
    if (n < 0 || n >= config.basis_size) throw ConfigError("state index out of range");
    if (start.sector[n] != end.sector[n])
      throw NumericalError("state " + std::to_string(n) + " changes symmetry sector between ramp endpoints");
    by_sector[start.sector[n]].push_back(slot);
  }

  std::vector<detail::SectorBatch> batches;
  for (const auto& [label, slots] : by_sector) {
    detail::SectorBatch batch;
    batch.op = &ops[op_index.at(label)];
    batch.slots = slots;
    const auto& members = batch.op->sector.members;
    batch.initial.resize(static_cast<Eigen::Index>(members.size()), static_cast<Eigen::Index>(slots.size()));
    for (std::size_t j = 0; j < slots.size(); ++j)
      for (std::size_t r = 0; r < members.size(); ++r)
        batch.initial(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
            start.eigenvectors(members[r], states[slots[j]]);
    batch.final_h = batch.op->kinetic + ramp.end_depth() * batch.op->potential;
    batches.push_back(std::move(batch));
  }

  int steps = control.fixed_steps > 0
                  ? control.fixed_steps
                  : std::max(16, static_cast<int>(std::ceil(ramp.duration() / control.initial_dt)));
  detail::RunOutput run = detail::run_fixed(batches, ramp, steps, n_states);
  double change = kNaN;
  if (control.fixed_steps <= 0) {
    bool converged = false;
    for (int r = 0; r < control.max_refinements; ++r) {
      steps *= 2;
      detail::RunOutput finer = detail::run_fixed(batches, ramp, steps, n_states);
      change = 0.0;
      for (int i = 0; i < n_states; ++i)
        change = std::max(change, std::abs(finer.e_na(i) - run.e_na(i)) / std::max(1.0, std::abs(finer.e_na(i))));
      run = std::move(finer);
      if (change < control.relative_tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalError("step refinement did not reach relative change " +
                           std::to_string(control.relative_tolerance) + " (last " + std::to_string(change) + ")");
  }

  PropagationResult res;
  res.states = states;
  res.steps = steps;
  res.dt = ramp.duration() / steps;
  res.refinement_change = change;
  res.e_na = run.e_na;
  res.e_ad.resize(n_states);
  res.norm_drift.resize(n_states);
  res.final_states = Eigen::MatrixXcd::Zero(config.basis_size, n_states);
  for (std::size_t bi = 0; bi < batches.size(); ++bi) {
    const auto& batch = batches[bi];
    const Eigen::MatrixXd& re = run.re[bi];
    const Eigen::MatrixXd& im = run.im[bi];
    const Eigen::MatrixXd gram_re = re.transpose() * re + im.transpose() * im;
    const Eigen::MatrixXd gram_im = re.transpose() * im - im.transpose() * re;
    const Eigen::MatrixXd dev = gram_re - Eigen::MatrixXd::Identity(gram_re.rows(), gram_re.cols());
    res.gram_deviation = std::max({res.gram_deviation, dev.cwiseAbs().maxCoeff(), gram_im.cwiseAbs().maxCoeff()});
    const auto& members = batch.op->sector.members;
    for (std::size_t j = 0; j < batch.slots.size(); ++j) {
      const int slot = batch.slots[j];
      const auto col = static_cast<Eigen::Index>(j);
      const double norm2 = re.col(col).squaredNorm() + im.col(col).squaredNorm();
      res.norm_drift(slot) = std::abs(std::sqrt(norm2) - 1.0);
      for (std::size_t r = 0; r < members.size(); ++r)
        res.final_states(members[r], slot) = {re(static_cast<Eigen::Index>(r), col), im(static_cast<Eigen::Index>(r), col)};
    }
  }
  for (int i = 0; i < n_states; ++i) res.e_ad(i) = end.energies(states[i]);
  if (res.max_norm_drift() > control.max_norm_drift)
    throw NumericalError("norm drift " + std::to_string(res.max_norm_drift()) + " exceeds tolerance");
  return res;
}

inline PropagationResult evolve_states(const SystemConfig& config, const Ramp& ramp, const std::vector<int>& states,
                                       const StepControl& control = {}) {
  const Spectrum start = solve_spectrum(config, ramp.start_depth(), SpectrumContent::WithVectors);
  const Spectrum end = solve_spectrum(config, ramp.end_depth(), SpectrumContent::WithVectors);
  return evolve_states(config, ramp, start, end, states, control);
}

/// Occupation-weighted excess energy sum_n f_n (E_NA - E_AD); f indexed by spectrum rank.
inline double irreversible_work(const PropagationResult& result, const Eigen::VectorXd& occupations) {
  double w = 0.0;
  for (std::size_t i = 0; i < result.states.size(); ++i) {
    const int n = result.states[i];
    if (n >= occupations.size()) throw ConfigError("occupation vector shorter than evolved state index");
    w += occupations(n) * (result.e_na(static_cast<Eigen::Index>(i)) - result.e_ad(static_cast<Eigen::Index>(i)));
  }
  return w;
}

struct ExcessRow {
  int state = 0;
  double e_ad = 0.0;
  double e_na = 0.0;
  double excess = 0.0;
  double norm_drift = 0.0;
};

struct ExcessProfile {
  std::vector<ExcessRow> rows;
  int argmax_state = -1;
};

inline ExcessProfile excess_energy_profile(const PropagationResult& result) {
  ExcessProfile p;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.states.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    ExcessRow row{result.states[i], result.e_ad(k), result.e_na(k), result.e_na(k) - result.e_ad(k),
                  result.norm_drift(k)};
    if (row.excess > best) {
      best = row.excess;
      p.argmax_state = row.state;
    }
    p.rows.push_back(row);
  }
  return p;
}

/// Both work strokes of a finite-time cycle, propagated once and reusable
/// for any particle number or bath temperature.
struct StrokeResults {
  Spectrum initial;  // at V_i
  Spectrum final;    // at V_f
  PropagationResult up;
  PropagationResult down;
  RampKind kind = RampKind::Reference;
  double ramp_time = 0.0;
};

inline StrokeResults propagate_strokes(const SystemConfig& config, const RampPair& ramps,
                                       const std::vector<int>& up_states, const std::vector<int>& down_states,
                                       const StepControl& control = {}) {
  if (ramps.up.ramp_time() != ramps.down.ramp_time()) throw ConfigError("stroke ramps must share t_f");
  StrokeResults s;
  s.initial = solve_spectrum(config, ramps.up.start_depth(), SpectrumContent::WithVectors);
  s.final = solve_spectrum(config, ramps.up.end_depth(), SpectrumContent::WithVectors);
  s.up = evolve_states(config, ramps.up, s.initial, s.final, up_states, control);
  s.down = evolve_states(config, ramps.down, s.final, s.initial, down_states, control);
  s.kind = ramps.up.kind();
  s.ramp_time = ramps.up.ramp_time();
  return s;
}

namespace detail {

/// sum_n f_n E_n with evolved energies where available and adiabatic ones elsewhere.
inline double stroke_energy(const PropagationResult& r, const Eigen::VectorXd& f, const Eigen::VectorXd& adiabatic) {
  double e = adiabatic.dot(f);
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    e += f(r.states[i]) * (r.e_na(k) - adiabatic(r.states[i]));
  }
  return e;
}

inline CycleMode mode_for(RampKind kind) {
  switch (kind) {
    case RampKind::StaAveraged: return CycleMode::StaAveraged;
    case RampKind::StaTargeted: return CycleMode::StaTargeted;
    default: return CycleMode::FiniteTime;
  }
}

}  // namespace detail

/// Finite-time cycle with instantaneous thermalization; tau = 2 t_f.
inline CycleRecord finite_time_cycle(const StrokeResults& strokes, int particles, int wells, const CycleParams& params) {
  params.validate();
  const Ensemble cold = thermal_ensemble(strokes.initial.energies, particles, params.t_cold, params.statistics);
  const Ensemble hot = thermal_ensemble(strokes.final.energies, particles, params.t_hot, params.statistics);
  CycleEnergies e;
  e.cold_initial = ensemble_energy(strokes.initial.energies, cold.occupations);
  e.cold_final = detail::stroke_energy(strokes.up, cold.occupations, strokes.final.energies);
  e.hot_final = ensemble_energy(strokes.final.energies, hot.occupations);
  e.hot_initial = detail::stroke_energy(strokes.down, hot.occupations, strokes.initial.energies);
  const double tau = 2.0 * to_internal_time(strokes.ramp_time);
  CycleRecord r = assemble_cycle(particles, wells, params, e, tau, detail::mode_for(strokes.kind));
  r.ramp_time = strokes.ramp_time;
  return r;
}

/// States whose occupation exceeds `cutoff` in the given ensemble.
inline std::vector<int> occupied_states(const Eigen::VectorXd& f, double cutoff) {
  std::vector<int> s;
  for (Eigen::Index n = 0; n < f.size(); ++n)
    if (f(n) > cutoff) s.push_back(static_cast<int>(n));
  return s;
}

inline CycleRecord finite_time_cycle(const SystemConfig& config, const CycleParams& params, const RampPair& ramps,
                                     const StepControl& control = {}, double occupation_cutoff = 1e-13) {
  params.validate();
  if (ramps.up.start_depth() != params.v_initial || ramps.up.end_depth() != params.v_final ||
      ramps.down.start_depth() != params.v_final || ramps.down.end_depth() != params.v_initial)
    throw ConfigError("ramp endpoints do not match the cycle depths");
  const Spectrum si = solve_spectrum(config, params.v_initial);
  const Spectrum sf = solve_spectrum(config, params.v_final);
  const Ensemble cold = thermal_ensemble(si.energies, config.particles, params.t_cold, params.statistics);
  const Ensemble hot = thermal_ensemble(sf.energies, config.particles, params.t_hot, params.statistics);
  const StrokeResults strokes =
      propagate_strokes(config, ramps, occupied_states(cold.occupations, occupation_cutoff),
                        occupied_states(hot.occupations, occupation_cutoff), control);
  return finite_time_cycle(strokes, config.particles, config.wells, params);
}

}  // namespace tgotto
