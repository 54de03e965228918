#pragma once

// Lattice-depth schedules for finite-time strokes.
//
// Ramp times t_f are given in units of 2 pi hbar / E_R. The integrator works in
// hbar / E_R, so Ramp::duration() = 2 pi t_f and depth() takes internal time.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tgotto/error.hpp"
#include "tgotto/spectral.hpp"

namespace tgotto {

/// Internal time units per unit of ramp time.
inline constexpr double kTimeUnit = 2.0 * kPi;

inline double to_internal_time(double t_paper) { return kTimeUnit * t_paper; }

enum class RampKind { Reference, StaAveraged, StaTargeted, Samples };
enum class Direction { Up, Down };

inline std::string to_string(RampKind k) {
  switch (k) {
    case RampKind::Reference: return "reference";
    case RampKind::StaAveraged: return "sta-averaged";
    case RampKind::StaTargeted: return "sta-targeted";
    case RampKind::Samples: return "samples";
  }
  return "unknown";
}

inline std::string to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }

/// Quintic smoothstep 10 s^3 - 15 s^4 + 6 s^5 and its first two s-derivatives.
struct Smoothstep {
  double value;
  double d1;
  double d2;
};

inline Smoothstep quintic_smoothstep(double s) {
  const double s2 = s * s;
  return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 30.0 * s2 * (1.0 - s) * (1.0 - s),
          60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)};
}

/// lambda(t) = (t/t_f)^3 [1 + 3(1 - t/t_f) + 6(1 - t/t_f)^2].
inline double lambda_schedule(double t, double t_f) {
  if (!(t_f > 0.0)) throw ConfigError("ramp time must be positive");
  if (t < 0.0 || t > t_f) throw ConfigError("time outside [0, t_f]");
  const double s = t / t_f;
  const double u = 1.0 - s;
  return s * s * s * (1.0 + 3.0 * u + 6.0 * u * u);
}

/// Reference depth V_i + (V_f - V_i) lambda(t); t and t_f in the same units.
inline double lambda_ramp(double t, double t_f, double v_initial, double v_final) {
  return v_initial + (v_final - v_initial) * lambda_schedule(t, t_f);
}

class Ramp {
 public:
  static Ramp reference(double v_start, double v_end, double t_f, Direction dir) {
    Ramp r(RampKind::Reference, dir, v_start, v_end, t_f);
    return r;
  }

  /// Piecewise-linear schedule through (t, V) samples, t in ramp-time units
  /// starting at 0 and ending at t_f.
  static Ramp from_samples(std::vector<double> t, std::vector<double> v, double v_start, double v_end,
                           Direction dir, RampKind kind = RampKind::Samples) {
    if (t.size() < 2 || t.size() != v.size()) throw ConfigError("ramp needs at least two (t, V) samples");
    if (t.front() != 0.0) throw ConfigError("ramp samples must start at t = 0");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1])) throw ConfigError("ramp sample times must increase strictly");
    for (double x : v)
      if (!std::isfinite(x)) throw ConfigError("ramp depth samples must be finite");
    Ramp r(kind, dir, v_start, v_end, t.back());
    r.times_ = std::move(t);
    r.depths_ = std::move(v);
    return r;
  }

  RampKind kind() const { return kind_; }
  Direction direction() const { return direction_; }
  double start_depth() const { return v_start_; }
  double end_depth() const { return v_end_; }
  double ramp_time() const { return t_f_; }
  double duration() const { return to_internal_time(t_f_); }
  bool flat() const { return v_start_ == v_end_ && kind_ == RampKind::Reference; }
  const std::vector<double>& sample_times() const { return times_; }
  const std::vector<double>& sample_depths() const { return depths_; }

  /// Depth at internal time t in [0, duration()].
  double depth(double t_internal) const {
    const double t = std::clamp(t_internal / kTimeUnit, 0.0, t_f_);
    if (kind_ == RampKind::Reference) return lambda_ramp(t, t_f_, v_start_, v_end_);
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return depths_.back();
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return (1.0 - w) * depths_[lo] + w * depths_[hi];
  }

  /// Depth sampled on `count` equally spaced ramp-time points (for export).
  std::pair<std::vector<double>, std::vector<double>> sampled(int count) const {
    if (count < 2) throw ConfigError("need at least two sample points");
    std::vector<double> t(count), v(count);
    for (int i = 0; i < count; ++i) {
      t[i] = t_f_ * i / (count - 1);
      v[i] = depth(to_internal_time(t[i]));
    }
    return {t, v};
  }

 private:
  Ramp(RampKind kind, Direction dir, double v_start, double v_end, double t_f)
      : kind_(kind), direction_(dir), v_start_(v_start), v_end_(v_end), t_f_(t_f) {
    require_depth(v_start);
    require_depth(v_end);
    if (!(t_f > 0.0) || !std::isfinite(t_f)) throw ConfigError("ramp time must be positive");
  }

  RampKind kind_;
  Direction direction_;
  double v_start_;
  double v_end_;
  double t_f_;
  std::vector<double> times_;
  std::vector<double> depths_;
};

/// Reference ramps for the two work strokes of a cycle.
struct RampPair {
  Ramp up;    // compression, V_i -> V_f
  Ramp down;  // expansion, V_f -> V_i
};

inline RampPair reference_ramps(double v_initial, double v_final, double t_f) {
  return {Ramp::reference(v_initial, v_final, t_f, Direction::Up),
          Ramp::reference(v_final, v_initial, t_f, Direction::Down)};
}

}  // namespace tgotto
