#pragma once

// Plain-text artifacts: CSV tables with 17 significant digits, ramp schedules,
// eigenvector matrices and grid specifications.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tgotto/error.hpp"
#include "tgotto/otto.hpp"
#include "tgotto/propagate.hpp"
#include "tgotto/ramp.hpp"
#include "tgotto/spectral.hpp"
#include "tgotto/thermo.hpp"

namespace tgotto::io {

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_number(int x) { return std::to_string(x); }
inline std::string format_number(bool x) { return x ? "1" : "0"; }

/// Builds a CSV body row by row; cells are joined with ',' and rows end in '\n'.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : columns_(header.size()) { add_row(header); }

  template <typename... Cells>
  void row(const Cells&... cells) {
    std::vector<std::string> r{format_number(cells)...};
    add_row(r);
  }

  void add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ConfigError("CSV row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  const std::string& str() const { return text_; }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text_;
  }

 private:
  std::size_t columns_;
  std::string text_;
};

inline CsvTable spectrum_csv(const Spectrum& s) {
  CsvTable t({"index", "energy"});
  for (int n = 0; n < s.size(); ++n) t.row(n, s.energies(n));
  return t;
}

inline CsvTable ensemble_csv(const Eigen::VectorXd& energies, const Ensemble& e) {
  CsvTable t({"index", "energy", "occupation"});
  for (Eigen::Index n = 0; n < energies.size(); ++n) t.row(static_cast<int>(n), energies(n), e.occupations(n));
  return t;
}

/// Row-major eigenvector matrix, one row per basis mode, space separated.
inline std::string matrix_text(const Eigen::MatrixXd& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s += ' ';
      s += format_number(m(r, c));
    }
    s += '\n';
  }
  return s;
}

inline const std::vector<std::string>& cycle_header() {
  static const std::vector<std::string> h{"N",   "M",   "V_i", "V_f",   "T_C", "T_H",      "W_C",    "W_H",
                                          "Q_C", "Q_H", "W_ext", "eta", "P",   "eta_star", "P_star", "engine_flag"};
  return h;
}

inline std::vector<std::string> cycle_cells(const CycleRecord& r, double eta_star = kNaN, double p_star = kNaN) {
  return {format_number(r.particles),       format_number(r.wells),          format_number(r.params.v_initial),
          format_number(r.params.v_final),  format_number(r.params.t_cold),  format_number(r.params.t_hot),
          format_number(r.work_compression), format_number(r.work_expansion), format_number(r.heat_cold),
          format_number(r.heat_hot),        format_number(r.work_extracted), format_number(r.efficiency),
          format_number(r.power),           format_number(eta_star),         format_number(p_star),
          format_number(r.engine)};
}

inline CsvTable propagation_csv(const PropagationResult& r) {
  CsvTable t({"n", "E_AD", "E_NA", "dE", "norm_drift"});
  for (const auto& row : excess_energy_profile(r).rows)
    t.row(row.state, row.e_ad, row.e_na, row.excess, row.norm_drift);
  return t;
}

/// Two-column (t, V) schedule; t in units of 2 pi hbar / E_R.
inline CsvTable ramp_csv(const std::vector<double>& t, const std::vector<double>& v) {
  CsvTable table({"t", "V"});
  for (std::size_t i = 0; i < t.size(); ++i) table.row(t[i], v[i]);
  return table;
}

inline CsvTable ramp_csv(const Ramp& ramp, int reference_points = 1025) {
  if (ramp.kind() == RampKind::Reference) {
    const auto [t, v] = ramp.sampled(reference_points);
    return ramp_csv(t, v);
  }
  return ramp_csv(ramp.sample_times(), ramp.sample_depths());
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != t.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

/// Reads a (t, V) schedule written by ramp_csv; a header line is optional.
inline Ramp read_ramp_csv(std::istream& in, double v_start, double v_end, Direction dir) {
  std::vector<double> t, v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (cells.size() != 2) throw ConfigError("ramp CSV rows need exactly two columns: " + line);
    if (first && trim(cells[0]) == "t") {
      first = false;
      continue;
    }
    first = false;
    t.push_back(parse_double(cells[0]));
    v.push_back(parse_double(cells[1]));
  }
  return Ramp::from_samples(std::move(t), std::move(v), v_start, v_end, dir);
}

inline Ramp read_ramp_csv(const std::string& path, double v_start, double v_end, Direction dir) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open ramp file " + path);
  return read_ramp_csv(in, v_start, v_end, dir);
}

/// Grid specification: "a,b,c" list, "lin:lo:hi:count" or "log:lo:hi:count".
inline std::vector<double> parse_grid(const std::string& spec) {
  const std::string s = trim(spec);
  if (s.empty()) throw ConfigError("empty grid specification");
  auto ranged = [&](bool log) {
    const auto parts = split(s, ':');
    if (parts.size() != 4) throw ConfigError("grid '" + s + "' must be kind:lo:hi:count");
    const double lo = parse_double(parts[1]);
    const double hi = parse_double(parts[2]);
    const double count_d = parse_double(parts[3]);
    const int count = static_cast<int>(count_d);
    if (count < 1 || count != count_d) throw ConfigError("grid count must be a positive integer");
    if (log && !(lo > 0.0 && hi > 0.0)) throw ConfigError("log grid bounds must be positive");
    if (log) return log_grid(lo, hi, count);
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return g;
  };
  if (s.rfind("lin:", 0) == 0) return ranged(false);
  if (s.rfind("log:", 0) == 0) return ranged(true);
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
  return out;
}

/// Integer grid: list "1,2,5" or inclusive range "lo..hi".
inline std::vector<int> parse_int_grid(const std::string& spec) {
  const std::string s = trim(spec);
  auto to_int = [](const std::string& p) {
    const double d = parse_double(p);
    if (d != std::floor(d)) throw ConfigError("expected an integer: '" + p + "'");
    return static_cast<int>(d);
  };
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const int lo = to_int(s.substr(0, dots));
    const int hi = to_int(s.substr(dots + 2));
    if (hi < lo) throw ConfigError("empty integer range '" + s + "'");
    std::vector<int> g;
    for (int i = lo; i <= hi; ++i) g.push_back(i);
    return g;
  }
  std::vector<int> g;
  for (const auto& p : split(s, ',')) g.push_back(to_int(p));
  if (g.empty()) throw ConfigError("empty integer grid");
  return g;
}

}  // namespace tgotto::io
