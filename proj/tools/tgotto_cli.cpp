// tgotto: batch driver for the lattice Otto engine simulator.
//
//   tgotto <spectrum|adiabatic|dynamics|sta|oracle> [options]
//
// Options may also come from an INI file given with --config; keys in a
// [subcommand] section map to that subcommand's long option names. Flags on
// the command line override the file. Every run writes CSV tables plus a
// <subcommand>.json sidecar into --out.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "tgotto/tgotto.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tgotto;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 1;

struct Common {
  std::string out = "tgotto-out";
  int basis_mult = 0;  // 0: recommended for the deepest lattice in the run
  double dt = 0.05;
  double tolerance = 1e-6;
};

struct Physical {
  int wells = 30;
  std::string particles;  // integer grid; empty means N = M
  std::string vi = "0";
  std::string vf = "25";
  double tc = 0.0;
  double th = 5.0;
};

/// Output directory, list of written files and the JSON sidecar.
class Run {
 public:
  Run(std::string subcommand, const Common& common) : name_(std::move(subcommand)), dir_(common.out) {
    fs::create_directories(dir_);
    meta_["program"] = "tgotto";
    meta_["version"] = kVersion;
    meta_["subcommand"] = name_;
    meta_["config"]["basis_mult"] = common.basis_mult;
    meta_["config"]["dt"] = common.dt;
    meta_["config"]["tolerance"] = common.tolerance;
  }

  json& meta() { return meta_; }
  json& config() { return meta_["config"]; }

  void write(const std::string& file, const io::CsvTable& table) {
    table.write((dir_ / file).string());
    meta_["files"].push_back(file);
  }

  void write_text(const std::string& file, const std::string& text) {
    std::ofstream out(dir_ / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + (dir_ / file).string());
    out << text;
    meta_["files"].push_back(file);
  }

  void finish() {
    std::ofstream out(dir_ / (name_ + ".json"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write JSON sidecar");
    out << meta_.dump(2) << '\n';
  }

 private:
  std::string name_;
  fs::path dir_;
  json meta_;
};

StepControl step_control(const Common& c) {
  if (!(c.dt > 0.0)) throw ConfigError("--dt must be positive");
  if (!(c.tolerance > 0.0)) throw ConfigError("--tol must be positive");
  StepControl s;
  s.initial_dt = c.dt;
  s.relative_tolerance = c.tolerance;
  return s;
}

int basis_multiplier(const Common& c, double max_depth) {
  if (c.basis_mult < 0) throw ConfigError("--basis-mult must be positive");
  return c.basis_mult > 0 ? c.basis_mult : recommended_basis_multiplier(max_depth);
}

double grid_max(const std::vector<double>& a, const std::vector<double>& b = {}) {
  double m = 0.0;
  for (double x : a) m = std::max(m, x);
  for (double x : b) m = std::max(m, x);
  return m;
}

std::vector<int> particle_grid(const Physical& p) {
  if (p.particles.empty()) return {p.wells};
  return io::parse_int_grid(p.particles);
}

void echo_physical(Run& run, const Physical& p, const std::vector<int>& ns, const std::vector<double>& vi,
                   const std::vector<double>& vf) {
  auto& c = run.config();
  c["wells"] = p.wells;
  c["particles"] = ns;
  c["vi"] = vi;
  c["vf"] = vf;
  c["tc"] = p.tc;
  c["th"] = p.th;
}

Statistics parse_statistics(const std::string& s) {
  if (s == "fermi-dirac") return Statistics::FermiDirac;
  if (s == "boltzmann") return Statistics::Boltzmann;
  throw ConfigError("unknown statistics '" + s + "'");
}

RampKind parse_kind(const std::string& s) {
  for (RampKind k : {RampKind::Reference, RampKind::StaAveraged, RampKind::StaTargeted})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown ramp kind '" + s + "' (reference, sta-averaged, sta-targeted)");
}

std::vector<std::string> finite_time_header() {
  auto h = io::cycle_header();
  h.push_back("t_f");
  h.push_back("mode");
  return h;
}

std::vector<std::string> finite_time_cells(const CycleRecord& r, const RatioRecord& q) {
  auto cells = io::cycle_cells(r, q.eta_star, q.power_star);
  cells.push_back(io::format_number(r.ramp_time));
  cells.push_back(to_string(r.mode));
  return cells;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOptions {
  Physical phys;
  std::string depths = "0,5,25";
  bool vectors = false;
  bool convergence = true;
};

void cmd_spectrum(const Common& common, const SpectrumOptions& o) {
  Run run("spectrum", common);
  const auto depths = io::parse_grid(o.depths);
  for (double v : depths) require_depth(v);
  const int mult = basis_multiplier(common, grid_max(depths));
  const SystemConfig config = SystemConfig::make(o.phys.wells, 1, mult);
  run.config()["wells"] = o.phys.wells;
  run.config()["depths"] = depths;
  run.config()["vectors"] = o.vectors;
  run.config()["convergence"] = o.convergence;
  run.meta()["basis_size"] = config.basis_size;
  run.meta()["basis_multiplier"] = mult;
  run.meta()["units"] = "energies in E_R, depth V0 in E_R, k0 = 1";

  io::CsvTable gaps({"index", "V0", "gap", "deep_limit", "shallow_limit", "basis_size", "doubling_change"});
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double v = depths[i];
    const Spectrum s = solve_spectrum(config, v, o.vectors ? SpectrumContent::WithVectors : SpectrumContent::EnergiesOnly);
    const std::string tag = std::to_string(i);
    run.write("spectrum_" + tag + ".csv", io::spectrum_csv(s));
    if (o.vectors) run.write_text("eigenvectors_" + tag + ".txt", io::matrix_text(s.eigenvectors));
    const double change = o.convergence ? convergence_report(config, v).max_relative_change : kNaN;
    gaps.row(static_cast<int>(i), v, band_gap(s, config.wells), 2.0 * std::sqrt(v) - 1.0, v / 2.0, config.basis_size,
             change);
  }
  run.write("gaps.csv", gaps);
  run.finish();
}

// ---------------------------------------------------------------- oracle

struct OracleOptions {
  std::string particles = "10,50,100";
  std::string vf = "200";
  double th = 5.0;
};

/// Numeric vs closed-form energies and ratios at unit filling, V_i = 0, T_C = 0.
io::CsvTable oracle_table(const std::vector<int>& ns, const std::vector<double>& vfs, double th, const Common& common,
                          json& meta) {
  io::CsvTable t({"N", "V_f", "T_H", "quantity", "numeric", "closed_form", "relative_difference"});
  auto add = [&](int n, double vf, const std::string& what, double num, double cf) {
    t.add_row({io::format_number(n), io::format_number(vf), io::format_number(th), what, io::format_number(num),
               io::format_number(cf), io::format_number(std::abs(num - cf) / std::abs(cf))});
  };
  for (double vf : vfs) {
    const int mult = basis_multiplier(common, vf);
    const SystemConfig one = SystemConfig::single_well(mult);
    const CycleParams p{0.0, vf, 0.0, th};
    const CycleRecord single = adiabatic_cycle(one, p);
    const CycleEnergies s_cf = analytic::sqhe_energies(vf, th);
    for (int n : ns) {
      const SystemConfig config = SystemConfig::make(n, n, mult);
      const CycleRecord many = adiabatic_cycle(config, p);
      const CycleEnergies cf = analytic::mb_energies(n, vf, th);
      add(n, vf, "H_TC(V_i)", many.energies.cold_initial, cf.cold_initial);
      add(n, vf, "H_TC(V_f)", many.energies.cold_final, cf.cold_final);
      add(n, vf, "H_TH(V_f)", many.energies.hot_final, cf.hot_final);
      add(n, vf, "H_TH(V_i)", many.energies.hot_initial, cf.hot_initial);
      add(n, vf, "sqhe_H_TC(V_i)", single.energies.cold_initial, s_cf.cold_initial);
      add(n, vf, "sqhe_H_TC(V_f)", single.energies.cold_final, s_cf.cold_final);
      add(n, vf, "sqhe_H_TH(V_f)", single.energies.hot_final, s_cf.hot_final);
      add(n, vf, "sqhe_H_TH(V_i)", single.energies.hot_initial, s_cf.hot_initial);
      const RatioRecord r = performance_ratios(many, single, n);
      const auto approx = analytic::ratio_approximation(n, vf, th);
      add(n, vf, "eta_star", r.eta_star, approx.value);
      add(n, vf, "P_star", r.power_star, approx.value);
      const auto dp = analytic::DeepLatticeParams::make(n, vf, th);
      json regime;
      regime["N"] = n;
      regime["V_f"] = vf;
      regime["theta"] = dp.theta;
      regime["gap"] = dp.gap;
      regime["deep"] = dp.deep;
      regime["cold"] = dp.cold;
      regime["approximation_valid"] = approx.valid;
      regime["basis_size"] = config.basis_size;
      meta["oracle_regime"].push_back(regime);
    }
  }
  meta["oracle_assumptions"] = "unit filling N = M, V_i = 0, T_C = 0, harmonic partition function";
  return t;
}

void cmd_oracle(const Common& common, const OracleOptions& o) {
  Run run("oracle", common);
  const auto ns = io::parse_int_grid(o.particles);
  const auto vfs = io::parse_grid(o.vf);
  run.config()["particles"] = ns;
  run.config()["vf"] = vfs;
  run.config()["th"] = o.th;
  run.write("oracle.csv", oracle_table(ns, vfs, o.th, common, run.meta()));
  run.finish();
}

// ---------------------------------------------------------------- adiabatic

struct AdiabaticOptions {
  Physical phys;
  double tau = 1.0;
  std::string statistics = "fermi-dirac";
  bool max_power = false;
  std::string max_power_grid = "log:0.001:500:400";
  bool oracle = false;
};

void cmd_adiabatic(const Common& common, const AdiabaticOptions& o) {
  Run run("adiabatic", common);
  const auto ns = particle_grid(o.phys);
  const auto vi = io::parse_grid(o.phys.vi);
  const auto vf = io::parse_grid(o.phys.vf);
  const auto mp_grid = io::parse_grid(o.max_power_grid);
  echo_physical(run, o.phys, ns, vi, vf);
  run.config()["tau"] = o.tau;
  run.config()["statistics"] = o.statistics;
  run.config()["max_power"] = o.max_power;
  run.config()["oracle"] = o.oracle;

  const double deepest = o.max_power ? std::max(grid_max(vi, vf), grid_max(mp_grid)) : grid_max(vi, vf);
  const int mult = basis_multiplier(common, deepest);
  const SystemConfig config = SystemConfig::make(o.phys.wells, 1, mult);
  const SystemConfig one = SystemConfig::single_well(mult);
  for (int n : ns) config.with_particles(n);
  run.meta()["basis_size"] = config.basis_size;
  run.meta()["basis_multiplier"] = mult;
  run.meta()["power_normalization"] = "P = W_ext / tau_nominal";

  CycleParams base;
  base.t_cold = o.phys.tc;
  base.t_hot = o.phys.th;
  base.tau_nominal = o.tau;
  base.statistics = parse_statistics(o.statistics);
  base.validate();

  SpectrumCache many_cache(config);
  SpectrumCache single_cache(one);
  io::CsvTable cycles(io::cycle_header());
  for (int n : ns) {
    for (double a : vi) {
      for (double b : vf) {
        CycleParams p = base;
        p.v_initial = a;
        p.v_final = b;
        p.validate();
        const CycleRecord many = adiabatic_cycle(many_cache.at(a), many_cache.at(b), n, config.wells, p);
        const CycleRecord single = adiabatic_cycle(single_cache.at(a), single_cache.at(b), 1, 1, p);
        const RatioRecord r = performance_ratios(many, single, n);
        cycles.add_row(io::cycle_cells(many, r.eta_star, r.power_star));
      }
    }
  }
  run.write("cycles.csv", cycles);

  if (o.max_power) {
    run.config()["max_power_grid"] = mp_grid;
    io::CsvTable mp({"engine", "N", "M", "V_i", "T_C", "T_H", "eta_at_max_power", "V_f_opt", "max_power", "eta_CA"});
    auto add = [&](const std::string& label, const SystemConfig& c, double v_initial) {
      CycleParams p = base;
      p.v_initial = v_initial;
      try {
        const MaxPowerResult r = efficiency_at_max_power(c, p, mp_grid);
        mp.add_row({label, io::format_number(c.particles), io::format_number(c.wells), io::format_number(v_initial),
                    io::format_number(p.t_cold), io::format_number(p.t_hot), io::format_number(r.eta_at_max_power),
                    io::format_number(r.v_final_optimal), io::format_number(r.max_power),
                    io::format_number(r.eta_curzon_ahlborn)});
      } catch (const NumericalError&) {
        // No engine operation on the grid: reported, not fatal.
        mp.add_row({label, io::format_number(c.particles), io::format_number(c.wells), io::format_number(v_initial),
                    io::format_number(p.t_cold), io::format_number(p.t_hot), "nan", "nan", "nan",
                    io::format_number(curzon_ahlborn(p.t_cold, p.t_hot))});
        run.meta()["empty_engine_region"].push_back(label + " N=" + std::to_string(c.particles));
      }
    };
    for (double a : vi) {
      for (int n : ns) add("many", config.with_particles(n), a);
      add("single", one, a);
    }
    run.write("max_power.csv", mp);
  }

  if (o.oracle) run.write("oracle.csv", oracle_table({config.wells}, vf, o.phys.th, common, run.meta()));
  run.finish();
}

// ---------------------------------------------------------------- dynamics

struct DynamicsOptions {
  Physical phys;
  std::string tf = "lin:1:20:20";
  std::string ramp_up;    // optional custom (t, V) schedules
  std::string ramp_down;
};

struct FiniteTimeBlock {
  StrokeResults many;
  StrokeResults single;
};

/// Propagates every state any of the requested N could occupy.
FiniteTimeBlock run_strokes(const SystemConfig& config, const SystemConfig& one, const std::vector<int>& ns,
                            const CycleParams& p, const RampPair& many_ramps, const RampPair& single_ramps,
                            const StepControl& control) {
  const Spectrum si = solve_spectrum(config, p.v_initial);
  const Spectrum sf = solve_spectrum(config, p.v_final);
  std::set<int> up, down;
  for (int n : ns) {
    for (int s : occupied_states(thermal_ensemble(si.energies, n, p.t_cold, p.statistics).occupations, 1e-13)) up.insert(s);
    for (int s : occupied_states(thermal_ensemble(sf.energies, n, p.t_hot, p.statistics).occupations, 1e-13)) down.insert(s);
  }
  const Spectrum oi = solve_spectrum(one, p.v_initial);
  const Spectrum of = solve_spectrum(one, p.v_final);
  const auto up1 = occupied_states(thermal_ensemble(oi.energies, 1, p.t_cold, p.statistics).occupations, 1e-13);
  const auto down1 = occupied_states(thermal_ensemble(of.energies, 1, p.t_hot, p.statistics).occupations, 1e-13);
  FiniteTimeBlock b;
  b.many = propagate_strokes(config, many_ramps, {up.begin(), up.end()}, {down.begin(), down.end()}, control);
  b.single = propagate_strokes(one, single_ramps, up1, down1, control);
  return b;
}

void cmd_dynamics(const Common& common, const DynamicsOptions& o) {
  Run run("dynamics", common);
  const auto ns = particle_grid(o.phys);
  const auto vi = io::parse_grid(o.phys.vi);
  const auto vf = io::parse_grid(o.phys.vf);
  if (vi.size() != 1 || vf.size() != 1) throw ConfigError("dynamics takes a single V_i and V_f");
  const bool custom = !o.ramp_up.empty() || !o.ramp_down.empty();
  if (custom && (o.ramp_up.empty() || o.ramp_down.empty()))
    throw ConfigError("--ramp-up and --ramp-down must be given together");
  std::vector<double> tfs = custom ? std::vector<double>{} : io::parse_grid(o.tf);
  echo_physical(run, o.phys, ns, vi, vf);
  run.config()["ramp_up"] = o.ramp_up;
  run.config()["ramp_down"] = o.ramp_down;

  const int mult = basis_multiplier(common, std::max(vi[0], vf[0]));
  const SystemConfig config = SystemConfig::make(o.phys.wells, 1, mult);
  const SystemConfig one = SystemConfig::single_well(mult);
  for (int n : ns) config.with_particles(n);
  const StepControl control = step_control(common);
  run.meta()["basis_size"] = config.basis_size;
  run.meta()["basis_multiplier"] = mult;
  run.meta()["time_unit"] = "t_f in 2 pi hbar / E_R; tau = 2 t_f";
  run.meta()["thermalization"] = "instantaneous";

  const CycleParams p{vi[0], vf[0], o.phys.tc, o.phys.th};
  p.validate();

  std::vector<RampPair> ramp_list;
  if (custom) {
    RampPair r{io::read_ramp_csv(o.ramp_up, p.v_initial, p.v_final, Direction::Up),
               io::read_ramp_csv(o.ramp_down, p.v_final, p.v_initial, Direction::Down)};
    tfs = {r.up.ramp_time()};
    ramp_list.push_back(std::move(r));
  } else {
    for (double tf : tfs) ramp_list.push_back(reference_ramps(p.v_initial, p.v_final, tf));
  }
  run.config()["tf"] = tfs;

  SpectrumCache cache(config);
  SpectrumCache cache1(one);
  const CycleRecord ad1 = adiabatic_cycle(cache1.at(p.v_initial), cache1.at(p.v_final), 1, 1, p);
  io::CsvTable adiabatic(io::cycle_header());
  std::vector<CycleRecord> ad_many;
  for (int n : ns) {
    ad_many.push_back(adiabatic_cycle(cache.at(p.v_initial), cache.at(p.v_final), n, config.wells, p));
    const RatioRecord r = performance_ratios(ad_many.back(), ad1, n);
    adiabatic.add_row(io::cycle_cells(ad_many.back(), r.eta_star, r.power_star));
  }
  run.write("adiabatic.csv", adiabatic);

  io::CsvTable cycles(finite_time_header());
  io::CsvTable wirr({"N", "t_f", "W_irr_up", "W_irr_down", "eta_over_eta_AD"});
  for (std::size_t i = 0; i < ramp_list.size(); ++i) {
    const RampPair& ramps = ramp_list[i];
    const FiniteTimeBlock b = run_strokes(config, one, ns, p, ramps, ramps, control);
    const CycleRecord single = finite_time_cycle(b.single, 1, 1, p);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const int n = ns[k];
      const CycleRecord many = finite_time_cycle(b.many, n, config.wells, p);
      const RatioRecord r = performance_ratios(many, single, n);
      cycles.add_row(finite_time_cells(many, r));
      const auto cold = thermal_ensemble(b.many.initial.energies, n, p.t_cold, p.statistics);
      const auto hot = thermal_ensemble(b.many.final.energies, n, p.t_hot, p.statistics);
      wirr.row(n, tfs[i], irreversible_work(b.many.up, cold.occupations),
               irreversible_work(b.many.down, hot.occupations), many.efficiency / ad_many[k].efficiency);
    }
    run.write("excess_up_" + std::to_string(i) + ".csv", io::propagation_csv(b.many.up));
    run.write("excess_down_" + std::to_string(i) + ".csv", io::propagation_csv(b.many.down));
  }
  run.write("cycles.csv", cycles);
  run.write("wirr.csv", wirr);
  run.finish();
}

// ---------------------------------------------------------------- sta

struct StaCliOptions {
  Physical phys;
  std::string tf = "5,10,15";
  std::string kinds = "reference,sta-averaged,sta-targeted";
  int grid_points = 2049;
  double kappa = 1.0;
};

void cmd_sta(const Common& common, const StaCliOptions& o) {
  Run run("sta", common);
  const auto ns = particle_grid(o.phys);
  const auto vi = io::parse_grid(o.phys.vi);
  const auto vf = io::parse_grid(o.phys.vf);
  if (vi.size() != 1 || vf.size() != 1) throw ConfigError("sta takes a single V_i and V_f");
  const auto tfs = io::parse_grid(o.tf);
  std::vector<RampKind> kinds;
  for (const auto& k : io::split(o.kinds, ',')) kinds.push_back(parse_kind(io::trim(k)));
  echo_physical(run, o.phys, ns, vi, vf);
  run.config()["tf"] = tfs;
  run.config()["kinds"] = o.kinds;
  run.config()["grid_points"] = o.grid_points;
  run.config()["kappa"] = o.kappa;

  const int mult = basis_multiplier(common, std::max(vi[0], vf[0]));
  const SystemConfig config = SystemConfig::make(o.phys.wells, 1, mult);
  const SystemConfig one = SystemConfig::single_well(mult);
  for (int n : ns) config.with_particles(n);
  const StepControl control = step_control(common);
  StaOptions opt;
  opt.grid_points = o.grid_points;
  opt.kinetic_coefficient = o.kappa;
  if (!(o.kappa > 0.0)) throw ConfigError("--kappa must be positive");

  run.meta()["basis_size"] = config.basis_size;
  run.meta()["basis_multiplier"] = mult;
  run.meta()["sta"] = {{"strokes", "both; the down ramp swaps initial and target states"},
                       {"endpoints", "schedule applied as computed inside [0, t_f], energies measured at the nominal depths"},
                       {"targeted_state", targeted_state(config.wells)},
                       {"averaged_states", config.wells},
                       {"single_well_reference", "same ramp family rebuilt for the one-well box"}};

  const CycleParams p{vi[0], vf[0], o.phys.tc, o.phys.th};
  p.validate();
  io::CsvTable cycles(finite_time_header());
  for (RampKind kind : kinds) {
    for (std::size_t i = 0; i < tfs.size(); ++i) {
      const std::string tag = to_string(kind) + "_" + std::to_string(i);
      const RampPair many_ramps = make_ramps(kind, config, p.v_initial, p.v_final, tfs[i], opt);
      const RampPair single_ramps = make_ramps(kind, one, p.v_initial, p.v_final, tfs[i], opt);
      run.write("ramp_" + tag + "_up.csv", io::ramp_csv(many_ramps.up, opt.grid_points));
      run.write("ramp_" + tag + "_down.csv", io::ramp_csv(many_ramps.down, opt.grid_points));
      const FiniteTimeBlock b = run_strokes(config, one, ns, p, many_ramps, single_ramps, control);
      const CycleRecord single = finite_time_cycle(b.single, 1, 1, p);
      for (int n : ns) {
        const CycleRecord many = finite_time_cycle(b.many, n, config.wells, p);
        cycles.add_row(finite_time_cells(many, performance_ratios(many, single, n)));
      }
      run.write("excess_" + tag + "_up.csv", io::propagation_csv(b.many.up));
    }
  }
  run.write("cycles.csv", cycles);
  run.finish();
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--basis-mult", c.basis_mult, "Sine modes per well, K/M (0: recommended for the deepest lattice)")
      ->capture_default_str();
}

void add_dynamics_controls(CLI::App* sub, Common& c) {
  sub->add_option("--dt", c.dt, "Initial time step, hbar/E_R")->capture_default_str();
  sub->add_option("--tol", c.tolerance, "Relative change of E_NA accepted between step halvings")->capture_default_str();
}

void add_physical(CLI::App* sub, Physical& p, bool grids) {
  sub->add_option("-M,--wells", p.wells, "Number of lattice wells M")->capture_default_str();
  sub->add_option("-N,--particles", p.particles, "Particle numbers: list or lo..hi (default N = M)")->join(',');
  sub->add_option("--vi", p.vi, grids ? "Initial depth grid" : "Initial depth V_i")->join(',')->capture_default_str();
  sub->add_option("--vf", p.vf, grids ? "Final depth grid" : "Final depth V_f")->join(',')->capture_default_str();
  sub->add_option("--tc", p.tc, "Cold bath temperature T_C")->capture_default_str();
  sub->add_option("--th", p.th, "Hot bath temperature T_H")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Otto engine with a hard-core boson gas in a boxed optical lattice"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "INI file; [subcommand] sections hold option defaults");
  app.require_subcommand(1);
  app.footer(
      "Grids: comma lists, lin:lo:hi:count or log:lo:hi:count. Particle grids: lists or lo..hi.\n"
      "Times t_f are in units of 2 pi hbar / E_R. Exit codes: 0 ok, 2 config error, 3 numerical failure.");

  Common common;

  SpectrumOptions spec;
  spec.phys.wells = 100;
  auto* s_spec = app.add_subcommand("spectrum", "Single-particle spectra and band gaps over a list of depths");
  add_common(s_spec, common);
  s_spec->add_option("-M,--wells", spec.phys.wells, "Number of lattice wells M")->capture_default_str();
  s_spec->add_option("--depths", spec.depths, "Depth grid V0")->join(',')->capture_default_str();
  s_spec->add_flag("--vectors", spec.vectors, "Also write eigenvector matrices");
  s_spec->add_flag("!--no-convergence", spec.convergence, "Skip the basis-doubling check");

  AdiabaticOptions adi;
  adi.phys.wells = 100;
  adi.phys.vf = "50";
  auto* s_adi = app.add_subcommand("adiabatic", "Adiabatic cycles, filling and depth sweeps, efficiency at max power");
  add_common(s_adi, common);
  add_physical(s_adi, adi.phys, true);
  s_adi->add_option("--tau", adi.tau, "Nominal cycle time for adiabatic power")->capture_default_str();
  s_adi->add_option("--statistics", adi.statistics, "fermi-dirac or boltzmann")->capture_default_str();
  s_adi->add_flag("--max-power", adi.max_power, "Maximize power over V_f for each N and V_i");
  s_adi->add_option("--max-power-grid", adi.max_power_grid, "V_f grid for the power maximization")->join(',')->capture_default_str();
  s_adi->add_flag("--oracle", adi.oracle, "Write numeric vs closed-form table for N = M");

  DynamicsOptions dyn;
  dyn.phys.particles = "20,30";
  auto* s_dyn = app.add_subcommand("dynamics", "Finite-time cycles and irreversible work under the reference ramp");
  add_common(s_dyn, common);
  add_dynamics_controls(s_dyn, common);
  add_physical(s_dyn, dyn.phys, false);
  s_dyn->add_option("--tf", dyn.tf, "Ramp time grid")->join(',')->capture_default_str();
  s_dyn->add_option("--ramp-up", dyn.ramp_up, "CSV (t, V) schedule for the compression stroke");
  s_dyn->add_option("--ramp-down", dyn.ramp_down, "CSV (t, V) schedule for the expansion stroke");

  StaCliOptions sta;
  sta.phys.vf = "5";
  sta.phys.th = 0.5;
  auto* s_sta = app.add_subcommand("sta", "Shortcut-to-adiabaticity ramps and the cycles they drive");
  add_common(s_sta, common);
  add_dynamics_controls(s_sta, common);
  add_physical(s_sta, sta.phys, false);
  s_sta->add_option("--tf", sta.tf, "Ramp time grid")->join(',')->capture_default_str();
  s_sta->add_option("--kinds", sta.kinds, "Ramp families, comma separated")->join(',')->capture_default_str();
  s_sta->add_option("--grid-points", sta.grid_points, "Samples per STA schedule")->capture_default_str();
  s_sta->add_option("--kappa", sta.kappa, "Kinetic coefficient hbar^2/2m in recoil units")->capture_default_str();

  OracleOptions ora;
  auto* s_ora = app.add_subcommand("oracle", "Closed-form energies and ratios against the numerical pipeline");
  add_common(s_ora, common);
  s_ora->add_option("-N,--particles", ora.particles, "Particle numbers at unit filling")->join(',')->capture_default_str();
  s_ora->add_option("--vf", ora.vf, "Final depth grid")->join(',')->capture_default_str();
  s_ora->add_option("--th", ora.th, "Hot bath temperature")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    std::cerr << "tgotto: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (s_spec->parsed()) cmd_spectrum(common, spec);
    if (s_adi->parsed()) cmd_adiabatic(common, adi);
    if (s_dyn->parsed()) cmd_dynamics(common, dyn);
    if (s_sta->parsed()) cmd_sta(common, sta);
    if (s_ora->parsed()) cmd_oracle(common, ora);
  } catch (const ConfigError& e) {
    std::cerr << "tgotto: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "tgotto: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "tgotto: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "tgotto: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
