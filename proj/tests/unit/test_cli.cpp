#include <catch2/catch.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "tgotto_cli_tests";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TGOTTO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh(const std::string& name) {
  const fs::path d = kRoot / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("spectrum output is byte identical across runs") {
  const fs::path a = fresh("spec_a"), b = fresh("spec_b");
  const std::string args = "spectrum --wells 4 --depths 0,5,20 --basis-mult 10 --vectors --out ";
  REQUIRE(run_cli(args + a.string()) == 0);
  REQUIRE(run_cli(args + b.string()) == 0);
  for (const char* f : {"spectrum_0.csv", "spectrum_2.csv", "gaps.csv", "eigenvectors_1.txt", "spectrum.json"})
    CHECK(slurp(a / f) == slurp(b / f));
  const auto meta = nlohmann::json::parse(slurp(a / "spectrum.json"));
  CHECK(meta["version"] == "0.1.0");
  CHECK(meta["basis_size"] == 40);
  CHECK(meta["config"]["depths"].size() == 3);
  CHECK(meta["files"].size() == 7);
  const std::string spectrum = slurp(a / "spectrum_0.csv");
  CHECK(spectrum.rfind("index,energy\n0,0.0625\n", 0) == 0);
}

TEST_CASE("config file supplies defaults and flags override") {
  const fs::path d = fresh("config");
  write_file(d / "run.ini", "[adiabatic]\nwells = 6\nparticles = 4..6\nvf = 3,9\nth = 2\nbasis-mult = 9\n");
  REQUIRE(run_cli("--config " + (d / "run.ini").string() + " adiabatic --th 3 --oracle --out " + d.string()) == 0);
  const auto meta = nlohmann::json::parse(slurp(d / "adiabatic.json"));
  CHECK(meta["config"]["wells"] == 6);
  CHECK(meta["config"]["th"] == 3.0);
  CHECK(meta["config"]["particles"].size() == 3);
  CHECK(meta["basis_size"] == 54);
  const std::string cycles = slurp(d / "cycles.csv");
  CHECK(std::count(cycles.begin(), cycles.end(), '\n') == 1 + 3 * 2);
  CHECK(fs::exists(d / "oracle.csv"));
}

TEST_CASE("max power table is written") {
  const fs::path d = fresh("maxp");
  REQUIRE(run_cli("adiabatic --wells 4 --particles 4 --tc 0.01 --th 0.1 --max-power --max-power-grid log:0.01:20:30 "
                  "--basis-mult 12 --out " + d.string()) == 0);
  const std::string t = slurp(d / "max_power.csv");
  CHECK(t.rfind("engine,N,M,V_i,T_C,T_H,eta_at_max_power", 0) == 0);
  CHECK(std::count(t.begin(), t.end(), '\n') == 3);
}

TEST_CASE("dynamics and sta subcommands run on a small lattice") {
  const fs::path d = fresh("dyn");
  REQUIRE(run_cli("dynamics --wells 3 --particles 2,3 --vf 6 --th 2 --tf 0.5,2 --basis-mult 10 --out " + d.string()) == 0);
  const std::string w = slurp(d / "wirr.csv");
  CHECK(std::count(w.begin(), w.end(), '\n') == 1 + 2 * 2);
  CHECK(fs::exists(d / "excess_up_1.csv"));

  const fs::path s = fresh("sta");
  REQUIRE(run_cli("sta --wells 3 --particles 3 --vf 5 --th 0.5 --tf 2 --grid-points 513 --basis-mult 10 --out " +
                  s.string()) == 0);
  CHECK(fs::exists(s / "ramp_sta-targeted_0_up.csv"));
  const auto meta = nlohmann::json::parse(slurp(s / "sta.json"));
  CHECK(meta["sta"]["targeted_state"] == 1);

  // A schedule written by the sta run drives the dynamics subcommand.
  const fs::path c = fresh("custom");
  REQUIRE(run_cli("dynamics --wells 3 --particles 3 --vf 5 --th 0.5 --basis-mult 10 --ramp-up " +
                  (s / "ramp_sta-averaged_0_up.csv").string() + " --ramp-down " +
                  (s / "ramp_sta-averaged_0_down.csv").string() + " --out " + c.string()) == 0);
  const auto cm = nlohmann::json::parse(slurp(c / "dynamics.json"));
  CHECK(cm["config"]["tf"][0] == 2.0);
}

TEST_CASE("oracle subcommand") {
  const fs::path d = fresh("oracle");
  REQUIRE(run_cli("oracle --particles 5 --vf 60 --out " + d.string()) == 0);
  const std::string t = slurp(d / "oracle.csv");
  CHECK(t.find("5,60,5,eta_star,") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 2") {
  const fs::path d = fresh("errors");
  CHECK(run_cli("") == 2);
  CHECK(run_cli("spectrum --depths=-1 --out " + d.string()) == 2);
  CHECK(run_cli("spectrum --depths lin:0:1 --out " + d.string()) == 2);
  CHECK(run_cli("spectrum --bogus --out " + d.string()) == 2);
  CHECK(run_cli("adiabatic --statistics bose --out " + d.string()) == 2);
  CHECK(run_cli("adiabatic --wells 3 --particles 40 --basis-mult 8 --out " + d.string()) == 2);
  CHECK(run_cli("sta --kinds warp --wells 2 --out " + d.string()) == 2);
  CHECK(run_cli("dynamics --ramp-up only.csv --out " + d.string()) == 2);
  CHECK(run_cli("--config /nonexistent.ini spectrum --out " + d.string()) == 2);
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("numerical failures exit with code 3") {
  const fs::path d = fresh("numerical");
  // Step control that cannot meet the tolerance.
  CHECK(run_cli("dynamics --wells 2 --particles 2 --vf 30 --tf 1 --dt 0.5 --tol 1e-17 --basis-mult 8 --out " +
                d.string()) == 3);
}
