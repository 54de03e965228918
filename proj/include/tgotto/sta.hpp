#pragma once

// Variational shortcut-to-adiabaticity ramps.
//
// Each single-particle state is modelled as a chirped interpolation
//   Phi(x, t) = N(t) [(1 - eps(t)) psi_I(x) + eps(t) psi_F(x)] exp(i b(t) x^2)
// between its eigenstate at the start and end depths. Stationarity of the
// action with kinetic term kappa |d_x Phi|^2 (hbar = 1) gives
//   b = (d xi^2/dt) / (8 kappa xi^2)
//   V = -[d_eps xi^2 (db/dt + 4 kappa b^2) + kappa d_eps beta] / d_eps alpha
// with xi^2 = <x^2>, alpha = <cos^2(x + phi)>, beta = int |d_x Psi|^2.
// In recoil units kappa = 1; kappa = 1/2 is the hbar = m = 1 form.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tgotto/error.hpp"
#include "tgotto/propagate.hpp"
#include "tgotto/ramp.hpp"
#include "tgotto/spectral.hpp"

namespace tgotto {

/// eps(t) with eps(0) = 0, eps(t_f) = 1 and vanishing first and second
/// derivatives at both ends; derivatives are with respect to t.
inline Smoothstep smoothstep_eps(double t, double t_f) {
  if (!(t_f > 0.0)) throw ConfigError("ramp time must be positive");
  if (t < 0.0 || t > t_f) throw ConfigError("time outside [0, t_f]");
  const Smoothstep s = quintic_smoothstep(t / t_f);
  return {s.value, s.d1 / t_f, s.d2 / (t_f * t_f)};
}

/// Pair matrix elements between the initial (I) and final (F) states.
struct StaMoments {
  double overlap = 0.0;  // <psi_I|psi_F>, made non-negative
  double x2_ii = 0.0, x2_if = 0.0, x2_ff = 0.0;
  double a_ii = 0.0, a_if = 0.0, a_ff = 0.0;
  double b_ii = 0.0, b_if = 0.0, b_ff = 0.0;
  bool identical = false;       // psi_I == psi_F, no driving needed
  bool near_orthogonal = false; // |S| < 1e-12, path passes near zero norm
};

/// Sine-basis operators needed for the moments.
struct StaOperators {
  Eigen::MatrixXd position_squared;
  Eigen::MatrixXd lattice;
  Eigen::VectorXd kinetic;

  static StaOperators make(const SystemConfig& config) {
    return {position_squared_matrix(config), potential_matrix(config), kinetic_energies(config)};
  }
};

inline StaMoments sta_moments(const Eigen::VectorXd& psi_i, Eigen::VectorXd psi_f, const StaOperators& ops) {
  if (psi_i.size() != ops.kinetic.size() || psi_f.size() != ops.kinetic.size())
    throw ConfigError("state vectors do not match the basis size");
  StaMoments m;
  double s = psi_i.dot(psi_f);
  if (s < 0.0) {
    psi_f = -psi_f;
    s = -s;
  }
  m.overlap = s;
  m.identical = s >= 1.0 - 1e-12;
  m.near_orthogonal = s < 1e-12;
  auto pair = [](const Eigen::VectorXd& a, const Eigen::MatrixXd& op, const Eigen::VectorXd& b) { return a.dot(op * b); };
  m.x2_ii = pair(psi_i, ops.position_squared, psi_i);
  m.x2_if = pair(psi_i, ops.position_squared, psi_f);
  m.x2_ff = pair(psi_f, ops.position_squared, psi_f);
  m.a_ii = pair(psi_i, ops.lattice, psi_i);
  m.a_if = pair(psi_i, ops.lattice, psi_f);
  m.a_ff = pair(psi_f, ops.lattice, psi_f);
  m.b_ii = psi_i.dot(ops.kinetic.cwiseProduct(psi_i));
  m.b_if = psi_i.dot(ops.kinetic.cwiseProduct(psi_f));
  m.b_ff = psi_f.dot(ops.kinetic.cwiseProduct(psi_f));
  return m;
}

inline StaMoments sta_moments(const Eigen::VectorXd& psi_i, const Eigen::VectorXd& psi_f, const SystemConfig& config) {
  return sta_moments(psi_i, psi_f, StaOperators::make(config));
}

/// Moments of the normalized interpolant and their eps-derivatives.
struct InterpolantValues {
  double xi2 = 0.0, alpha = 0.0, beta = 0.0;
  double dxi2 = 0.0, dalpha = 0.0, dbeta = 0.0;
  double d2xi2 = 0.0;
};

inline InterpolantValues interpolant(double eps, const StaMoments& m) {
  if (eps < 0.0 || eps > 1.0) throw ConfigError("interpolation parameter outside [0, 1]");
  const double u = 1.0 - eps;
  // Norm denominator g = |(1-e) psi_I + e psi_F|^2 and its derivatives.
  const double g = u * u + eps * eps + 2.0 * eps * u * m.overlap;
  const double g1 = -2.0 * u + 2.0 * eps + 2.0 * (1.0 - 2.0 * eps) * m.overlap;
  const double g2 = 4.0 - 4.0 * m.overlap;
  if (g < 1e-14) throw NumericalError("interpolant norm vanishes");

  struct Ratio {
    double value, d1, d2;
  };
  auto ratio = [&](double ii, double ifx, double ff) {
    const double q = u * u * ii + 2.0 * eps * u * ifx + eps * eps * ff;
    const double q1 = -2.0 * u * ii + 2.0 * (1.0 - 2.0 * eps) * ifx + 2.0 * eps * ff;
    const double q2 = 2.0 * ii - 4.0 * ifx + 2.0 * ff;
    const double num1 = q1 * g - q * g1;
    return Ratio{q / g, num1 / (g * g), (q2 * g - q * g2) / (g * g) - 2.0 * g1 * num1 / (g * g * g)};
  };
  const Ratio x = ratio(m.x2_ii, m.x2_if, m.x2_ff);
  const Ratio a = ratio(m.a_ii, m.a_if, m.a_ff);
  const Ratio b = ratio(m.b_ii, m.b_if, m.b_ff);
  return {x.value, a.value, b.value, x.d1, a.d1, b.d1, x.d2};
}

struct StaOptions {
  int grid_points = 2049;
  double kinetic_coefficient = 1.0;  // hbar^2 / 2m in the units of the Hamiltonian
  double singular_threshold = 1e-10; // on |d alpha / d eps|
  double max_singular_fraction = 0.05;
};

/// Chirp b and its time derivative at one instant; times are internal.
struct ChirpState {
  double b = 0.0;
  double db = 0.0;
};

inline ChirpState chirp(const InterpolantValues& iv, const Smoothstep& eps, double kappa) {
  const double h = iv.dxi2 / iv.xi2;
  const double dh = iv.d2xi2 / iv.xi2 - h * h;
  return {h * eps.d1 / (8.0 * kappa), (dh * eps.d1 * eps.d1 + h * eps.d2) / (8.0 * kappa)};
}

/// Control depth at internal time t for one state; NaN where d alpha / d eps
/// falls below the singular threshold.
inline double sta_depth(const StaMoments& m, double t_internal, double duration, const StaOptions& opt) {
  const Smoothstep eps = smoothstep_eps(std::clamp(t_internal, 0.0, duration), duration);
  const InterpolantValues iv = interpolant(std::clamp(eps.value, 0.0, 1.0), m);
  if (std::abs(iv.dalpha) < opt.singular_threshold) return kNaN;
  const double kappa = opt.kinetic_coefficient;
  const ChirpState c = chirp(iv, eps, kappa);
  return -(iv.dxi2 * (c.db + 4.0 * kappa * c.b * c.b) + kappa * iv.dbeta) / iv.dalpha;
}

struct StaRamp {
  Ramp ramp;
  bool degenerate = false;
  std::vector<int> singular;  // grid indices filled by interpolation
};

namespace detail {

/// Replaces NaN entries by a quadratic through the three nearest finite samples.
inline void fill_singular(std::vector<double>& v, const std::vector<int>& bad) {
  std::vector<int> good;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (std::isfinite(v[i])) good.push_back(i);
  if (good.size() < 3) throw NumericalError("too few regular points to interpolate STA ramp");
  for (int k : bad) {
    std::vector<int> near = good;
    std::partial_sort(near.begin(), near.begin() + 3, near.end(), [k](int a, int b) {
      return std::abs(a - k) < std::abs(b - k) || (std::abs(a - k) == std::abs(b - k) && a < b);
    });
    double value = 0.0;
    for (int i = 0; i < 3; ++i) {
      double w = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) w *= static_cast<double>(k - near[j]) / (near[i] - near[j]);
      value += w * v[near[i]];
    }
    v[k] = value;
  }
}

inline std::vector<double> ramp_grid(double t_f, int points) {
  if (points < 512) throw ConfigError("STA ramps need at least 512 grid points");
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i) t[i] = t_f * i / (points - 1);
  t.back() = t_f;
  return t;
}

struct StaSamples {
  std::vector<double> depths;
  std::vector<int> singular;
  bool degenerate = false;
};

inline StaSamples sample_state(const StaMoments& m, const std::vector<double>& t_grid, double v_start,
                               const StaOptions& opt) {
  StaSamples out;
  const double duration = to_internal_time(t_grid.back());
  out.depths.resize(t_grid.size());
  if (m.identical) {
    out.degenerate = true;
    std::fill(out.depths.begin(), out.depths.end(), v_start);
    for (int i = 0; i < static_cast<int>(t_grid.size()); ++i) out.singular.push_back(i);
    return out;
  }
  if (m.near_orthogonal) throw NumericalError("initial and target states are orthogonal; STA path undefined");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    out.depths[i] = sta_depth(m, to_internal_time(t_grid[i]), duration, opt);
    if (!std::isfinite(out.depths[i])) {
      out.depths[i] = kNaN;
      out.singular.push_back(static_cast<int>(i));
    }
  }
  if (out.singular.size() > opt.max_singular_fraction * t_grid.size())
    throw NumericalError("STA ramp rejected: " + std::to_string(out.singular.size()) + " of " +
                         std::to_string(t_grid.size()) + " grid points singular");
  if (!out.singular.empty()) fill_singular(out.depths, out.singular);
  return out;
}

struct EndpointStates {
  Spectrum start;
  Spectrum end;
};

inline EndpointStates endpoint_states(const SystemConfig& config, double v_start, double v_end) {
  return {solve_spectrum(config, v_start, SpectrumContent::WithVectors),
          solve_spectrum(config, v_end, SpectrumContent::WithVectors)};
}

}  // namespace detail

/// STA ramp optimized for eigenstate n (0-based) of the stroke start depth.
inline StaRamp sta_ramp_single(int n, const SystemConfig& config, double v_initial, double v_final, double t_f,
                               Direction dir = Direction::Up, const StaOptions& opt = {}) {
  config.validate();
  if (n < 0 || n >= config.basis_size) throw ConfigError("state index out of range");
  const double v_start = dir == Direction::Up ? v_initial : v_final;
  const double v_end = dir == Direction::Up ? v_final : v_initial;
  const auto ends = detail::endpoint_states(config, v_start, v_end);
  const auto ops = StaOperators::make(config);
  const auto t = detail::ramp_grid(t_f, opt.grid_points);
  const StaMoments m = sta_moments(ends.start.eigenvectors.col(n), ends.end.eigenvectors.col(n), ops);
  auto samples = detail::sample_state(m, t, v_start, opt);
  return {Ramp::from_samples(t, std::move(samples.depths), v_start, v_end, dir, RampKind::StaTargeted),
          samples.degenerate, std::move(samples.singular)};
}

/// Pointwise mean of the single-state ramps over the lowest band (M states).
inline StaRamp sta_ramp_averaged(const SystemConfig& config, double v_initial, double v_final, double t_f,
                                 Direction dir = Direction::Up, const StaOptions& opt = {}) {
  config.validate();
  const double v_start = dir == Direction::Up ? v_initial : v_final;
  const double v_end = dir == Direction::Up ? v_final : v_initial;
  const auto ends = detail::endpoint_states(config, v_start, v_end);
  const auto ops = StaOperators::make(config);
  const auto t = detail::ramp_grid(t_f, opt.grid_points);
  std::vector<double> mean(t.size(), 0.0);
  StaRamp out{Ramp::reference(v_start, v_end, t_f, dir), true, {}};
  std::vector<char> flagged(t.size(), 0);
  for (int n = 0; n < config.wells; ++n) {
    const StaMoments m = sta_moments(ends.start.eigenvectors.col(n), ends.end.eigenvectors.col(n), ops);
    const auto samples = detail::sample_state(m, t, v_start, opt);
    out.degenerate = out.degenerate && samples.degenerate;
    for (std::size_t i = 0; i < t.size(); ++i) mean[i] += samples.depths[i] / config.wells;
    if (!samples.degenerate)
      for (int i : samples.singular) flagged[i] = 1;
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    if (flagged[i]) out.singular.push_back(static_cast<int>(i));
  out.ramp = Ramp::from_samples(t, std::move(mean), v_start, v_end, dir, RampKind::StaAveraged);
  return out;
}

/// State targeted by the gap ramp: 0-based index M - 2 (M - 1 counting from one).
/// It shares a sector with the first state above the gap, M, so the gap opens
/// between the two and it carries most of the excess energy of a fast ramp.
/// The top-of-band state M - 1 is alone in its sector and is barely excited.
inline int targeted_state(int wells) { return std::max(0, wells - 2); }

inline StaRamp sta_ramp_targeted(const SystemConfig& config, double v_initial, double v_final, double t_f,
                                 Direction dir = Direction::Up, const StaOptions& opt = {}) {
  return sta_ramp_single(targeted_state(config.wells), config, v_initial, v_final, t_f, dir, opt);
}

/// Up and down ramps of the requested family for one cycle.
inline RampPair make_ramps(RampKind kind, const SystemConfig& config, double v_initial, double v_final, double t_f,
                           const StaOptions& opt = {}) {
  switch (kind) {
    case RampKind::Reference: return reference_ramps(v_initial, v_final, t_f);
    case RampKind::StaAveraged:
      return {sta_ramp_averaged(config, v_initial, v_final, t_f, Direction::Up, opt).ramp,
              sta_ramp_averaged(config, v_initial, v_final, t_f, Direction::Down, opt).ramp};
    case RampKind::StaTargeted:
      return {sta_ramp_targeted(config, v_initial, v_final, t_f, Direction::Up, opt).ramp,
              sta_ramp_targeted(config, v_initial, v_final, t_f, Direction::Down, opt).ramp};
    case RampKind::Samples: break;
  }
  throw ConfigError("sample ramps must be supplied explicitly");
}

inline CycleRecord finite_time_cycle(const SystemConfig& config, const CycleParams& params, double t_f, RampKind kind,
                                     const StepControl& control = {}, const StaOptions& opt = {}) {
  return finite_time_cycle(config, params, make_ramps(kind, config, params.v_initial, params.v_final, t_f, opt),
                           control);
}

/// Many-body cycle and its single-well reference driven by the same ramp family.
struct FiniteTimeComparison {
  CycleRecord many;
  CycleRecord single;
  RatioRecord ratios;
};

inline FiniteTimeComparison compare_finite_time(const SystemConfig& config, const SystemConfig& single,
                                                const CycleParams& params, double t_f, RampKind kind,
                                                const StepControl& control = {}, const StaOptions& opt = {}) {
  if (single.wells != 1 || single.particles != 1) throw ConfigError("reference engine must be one particle in one well");
  FiniteTimeComparison c;
  c.many = finite_time_cycle(config, params, t_f, kind, control, opt);
  c.single = finite_time_cycle(single, params, t_f, kind, control, opt);
  c.ratios = performance_ratios(c.many, c.single, config.particles);
  return c;
}

}  // namespace tgotto
