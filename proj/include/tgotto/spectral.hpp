#pragma once

// Single-particle Hamiltonian of a hard-wall box with a superimposed optical
// lattice, expanded in the box sine modes.
//
// Units: k0 = 1, E_R = hbar^2 k0^2 / 2m = 1, hbar = 1. The box spans
// x in [-L/2, L/2] with L = M*pi, and the lattice is V0 cos^2(x + phi) with
// phi = 0 for even M and pi/2 for odd M. In the basis
//   phi_n(x) = sqrt(2/L) sin(n pi (x + L/2) / L),  n = 1..K
// the kinetic term is diagonal, (n/M)^2, and the lattice only couples modes
// with |m - n| = 2M or m + n = 2M. The Hamiltonian therefore splits into M + 1
// independent sectors labelled by n mod 2M up to reflection; solve_spectrum
// diagonalizes sector by sector, diagonalize() is the dense reference route.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "tgotto/error.hpp"

namespace tgotto {

inline constexpr double kPi = std::numbers::pi;

/// Basis multiplier K/M that keeps the lowest two bands converged to roughly
/// 1e-8 relative up to the given lattice depth.
inline int recommended_basis_multiplier(double max_depth) {
  const double depth = std::max(0.0, max_depth);
  return std::max(8, 6 + static_cast<int>(std::ceil(1.2 * std::sqrt(depth))));
}

struct SystemConfig {
  int wells = 1;       // M
  int particles = 1;   // N
  int basis_size = 8;  // K, number of box sine modes

  static SystemConfig make(int wells, int particles, int basis_multiplier) {
    SystemConfig c{wells, particles, wells * basis_multiplier};
    c.validate();
    return c;
  }

  /// The single-well box used for the single-particle reference engine.
  static SystemConfig single_well(int basis_multiplier) { return make(1, 1, basis_multiplier); }

  SystemConfig with_particles(int n) const {
    SystemConfig c = *this;
    c.particles = n;
    c.validate();
    return c;
  }

  double phase() const { return wells % 2 == 0 ? 0.0 : kPi / 2.0; }
  double box_length() const { return wells * kPi; }
  int basis_multiplier() const { return basis_size / wells; }

  void validate() const {
    if (wells < 1) throw ConfigError("number of wells must be positive");
    if (particles < 1) throw ConfigError("number of particles must be positive");
    if (basis_size < 4 * wells)
      throw ConfigError("basis size " + std::to_string(basis_size) + " below 4M = " +
                        std::to_string(4 * wells));
    if (particles > basis_size)
      throw ConfigError("basis of " + std::to_string(basis_size) + " modes cannot hold " +
                        std::to_string(particles) + " particles");
  }
};

struct Spectrum {
  double depth = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd energies;      // ascending
  Eigen::MatrixXd eigenvectors;  // columns in the sine basis; empty when not requested
  std::vector<int> sector;       // sector label per eigenstate, empty for the dense route

  int size() const { return static_cast<int>(energies.size()); }
  bool has_vectors() const { return eigenvectors.cols() > 0; }
};

enum class SpectrumContent { EnergiesOnly, WithVectors };

/// <m| cos^2(x + phi) |n> for 1-based mode indices.
inline double potential_element(int wells, int m, int n) {
  double value = 0.0;
  if (m == n) value += 0.5;
  if (std::abs(m - n) == 2 * wells) value += 0.25;
  if (m + n == 2 * wells) value -= 0.25;
  return value;
}

inline Eigen::MatrixXd potential_matrix(const SystemConfig& config) {
  const int k = config.basis_size;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    p(i, i) = potential_element(config.wells, i + 1, i + 1);
    for (int j : {i + 2 * config.wells, 2 * config.wells - 2 - i}) {
      if (j > i && j < k) {
        p(i, j) = potential_element(config.wells, i + 1, j + 1);
        p(j, i) = p(i, j);
      }
    }
  }
  return p;
}

inline Eigen::VectorXd kinetic_energies(const SystemConfig& config) {
  Eigen::VectorXd d(config.basis_size);
  for (int i = 0; i < config.basis_size; ++i) {
    const double q = static_cast<double>(i + 1) / config.wells;
    d(i) = q * q;
  }
  return d;
}

inline void require_depth(double depth) {
  if (!(depth >= 0.0) || !std::isfinite(depth))
    throw ConfigError("lattice depth must be finite and non-negative, got " + std::to_string(depth));
}

inline Eigen::MatrixXd hamiltonian(const SystemConfig& config, double depth) {
  require_depth(depth);
  Eigen::MatrixXd h = depth * potential_matrix(config);
  h.diagonal() += kinetic_energies(config);
  return h;
}

/// Position-squared matrix (x measured from the box centre) in the sine basis.
inline Eigen::MatrixXd position_squared_matrix(const SystemConfig& config) {
  const int k = config.basis_size;
  const double l = config.box_length();
  const double l2 = l * l;
  const double pi2 = kPi * kPi;
  Eigen::MatrixXd x2 = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    const double m = i + 1;
    x2(i, i) = l2 / 12.0 - l2 / (2.0 * pi2 * m * m);
    for (int j = i + 2; j < k; j += 2) {
      const double n = j + 1;
      const double d = m * m - n * n;
      x2(i, j) = 8.0 * l2 * m * n / (pi2 * d * d);
      x2(j, i) = x2(i, j);
    }
  }
  return x2;
}

/// Makes the first coefficient with magnitude above 1e-8 positive in every column.
inline void fix_eigenvector_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, c)) > 1e-8) {
        if (vectors(r, c) < 0.0) vectors.col(c) *= -1.0;
        break;
      }
    }
  }
}

/// Dense symmetric diagonalization; returns the lowest n_states eigenpairs.
inline Spectrum diagonalize(const Eigen::MatrixXd& h, int n_states) {
  if (h.rows() != h.cols()) throw ConfigError("Hamiltonian must be square");
  if (n_states < 1 || n_states > h.rows())
    throw ConfigError("requested " + std::to_string(n_states) + " states from a " +
                      std::to_string(h.rows()) + "-dimensional matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver did not converge");
  Spectrum s;
  s.energies = solver.eigenvalues().head(n_states);
  s.eigenvectors = solver.eigenvectors().leftCols(n_states);
  fix_eigenvector_signs(s.eigenvectors);
  return s;
}

struct Sector {
  int label = 0;              // n mod 2M folded into [0, M]
  std::vector<int> members;   // 0-based basis indices, ascending
};

inline std::vector<Sector> sectors(const SystemConfig& config) {
  const int period = 2 * config.wells;
  std::vector<Sector> out(config.wells + 1);
  for (int s = 0; s <= config.wells; ++s) out[s].label = s;
  for (int i = 0; i < config.basis_size; ++i) {
    const int r = (i + 1) % period;
    out[std::min(r, period - r)].members.push_back(i);
  }
  std::erase_if(out, [](const Sector& s) { return s.members.empty(); });
  return out;
}

namespace detail {

inline Eigen::MatrixXd restrict_matrix(const Eigen::MatrixXd& full, const std::vector<int>& idx) {
  const auto b = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(b, b);
  for (Eigen::Index r = 0; r < b; ++r)
    for (Eigen::Index c = 0; c < b; ++c) out(r, c) = full(idx[r], idx[c]);
  return out;
}

}  // namespace detail

/// Kinetic and lattice blocks of one sector; H_sector(V) = kinetic + V * potential.
struct SectorOperators {
  Sector sector;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd potential;
};

inline std::vector<SectorOperators> sector_operators(const SystemConfig& config) {
  std::vector<SectorOperators> ops;
  const Eigen::VectorXd d = kinetic_energies(config);
  for (auto& s : sectors(config)) {
    const auto b = static_cast<Eigen::Index>(s.members.size());
    SectorOperators op{s, Eigen::MatrixXd::Zero(b, b), Eigen::MatrixXd::Zero(b, b)};
    for (Eigen::Index r = 0; r < b; ++r) {
      op.kinetic(r, r) = d(s.members[r]);
      for (Eigen::Index c = 0; c < b; ++c)
        op.potential(r, c) = potential_element(config.wells, s.members[r] + 1, s.members[c] + 1);
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

/// Full spectrum at one lattice depth, solved sector by sector.
inline Spectrum solve_spectrum(const SystemConfig& config, double depth,
                               SpectrumContent content = SpectrumContent::EnergiesOnly) {
  config.validate();
  require_depth(depth);
  const bool vectors = content == SpectrumContent::WithVectors;

  struct Level {
    double energy;
    int sector;
    int local;
  };
  std::vector<Level> levels;
  levels.reserve(config.basis_size);
  const auto ops = sector_operators(config);
  std::vector<Eigen::MatrixXd> local_vectors(ops.size());

  for (std::size_t s = 0; s < ops.size(); ++s) {
    const Eigen::MatrixXd h = ops[s].kinetic + depth * ops[s].potential;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericalError("eigensolver did not converge in sector " +
                           std::to_string(ops[s].sector.label));
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      levels.push_back({solver.eigenvalues()(i), static_cast<int>(s), static_cast<int>(i)});
    if (vectors) local_vectors[s] = solver.eigenvectors();
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    return a.energy < b.energy;
  });

  Spectrum out;
  out.depth = depth;
  out.energies.resize(config.basis_size);
  out.sector.resize(config.basis_size);
  if (vectors) out.eigenvectors = Eigen::MatrixXd::Zero(config.basis_size, config.basis_size);
  for (int n = 0; n < config.basis_size; ++n) {
    const Level& lv = levels[n];
    out.energies(n) = lv.energy;
    out.sector[n] = ops[lv.sector].sector.label;
    if (vectors) {
      const auto& members = ops[lv.sector].sector.members;
      for (std::size_t r = 0; r < members.size(); ++r)
        out.eigenvectors(members[r], n) = local_vectors[lv.sector](static_cast<Eigen::Index>(r), lv.local);
    }
  }
  if (vectors) fix_eigenvector_signs(out.eigenvectors);
  return out;
}

/// Gap above the lowest band: E_M - E_{M-1} (0-based).
inline double band_gap(const Spectrum& spectrum, int wells) {
  if (wells < 1 || spectrum.size() <= wells)
    throw ConfigError("band gap needs more than M = " + std::to_string(wells) + " states");
  return spectrum.energies(wells) - spectrum.energies(wells - 1);
}

struct ConvergenceReport {
  int basis_size = 0;
  int doubled_basis_size = 0;
  int checked_states = 0;
  double max_relative_change = 0.0;
  int worst_state = 0;
};

/// Relative change of the lowest 2M eigenvalues when the basis is doubled.
inline ConvergenceReport convergence_report(const SystemConfig& config, double depth) {
  SystemConfig doubled = config;
  doubled.basis_size = 2 * config.basis_size;
  const Spectrum coarse = solve_spectrum(config, depth);
  const Spectrum fine = solve_spectrum(doubled, depth);
  ConvergenceReport r;
  r.basis_size = config.basis_size;
  r.doubled_basis_size = doubled.basis_size;
  r.checked_states = std::min(2 * config.wells, config.basis_size);
  for (int n = 0; n < r.checked_states; ++n) {
    const double change =
        std::abs(coarse.energies(n) - fine.energies(n)) / std::abs(fine.energies(n));
    if (change > r.max_relative_change) {
      r.max_relative_change = change;
      r.worst_state = n;
    }
  }
  return r;
}

}  // namespace tgotto
