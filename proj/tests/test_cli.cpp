// End-to-end command-line driver checks: exit-code mapping, output files,
// manifest contents, config-file loading, and run-to-run determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "rarefaction/cli.hpp"
#include "rarefaction/errors.hpp"
#include "rarefaction/io.hpp"

namespace fs = std::filesystem;
using rarefaction::CsvTable;
using rarefaction::read_csv;
using rarefaction::read_json;
using rarefaction::run_cli;

namespace {

int run_args(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"rarefaction"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const std::string& s : storage) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

// Per-process scratch area so parallel ctest invocations cannot collide.
fs::path fresh_root(const std::string& name) {
  const fs::path root = fs::temp_directory_path() /
                        ("rarefaction_cli_" + std::to_string(::getpid())) /
                        name;
  fs::remove_all(root);
  fs::create_directories(root);
  return root;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One modest evolution run shared by the cases that only need an existing
// run directory (diagnose, file layout). Built on first use.
const fs::path& shared_evolve_dir() {
  static const fs::path dir = [] {
    const fs::path root = fresh_root("shared_evolve");
    const int rc = run_args({"evolve", "--delta", "1e-2", "--order", "2",
                             "--u-star", "0.4", "--nu", "24", "--t-end", "1.6",
                             "--out", root.string(), "--tag", "base"});
    REQUIRE(rc == 0);
    return root / "base";
  }();
  return dir;
}

}  // namespace

TEST_CASE("help and version requests succeed") {
  CHECK(run_args({"--version"}) == 0);
  CHECK(run_args({"--help"}) == 0);
}

TEST_CASE("argument and configuration errors exit with status 1") {
  const fs::path root = fresh_root("errors");
  // Missing subcommand.
  CHECK(run_args({}) == 1);
  // Unknown flag.
  CHECK(run_args({"riemann1d", "--no-such-flag"}) == 1);
  // Equation of state rejects an exponent at or below 1.
  CHECK(run_args({"riemann1d", "--gamma", "0.5", "--out", root.string()}) == 1);
  // March asked to end before it starts.
  CHECK(run_args({"evolve", "--t-end", "0.5", "--out", root.string()}) == 1);
  // The config flag belongs before the subcommand.
  CHECK(run_args({"riemann1d", "--config", "/tmp/nope.ini"}) == 1);
  // diagnose requires at least one --run.
  CHECK(run_args({"diagnose", "--out", root.string()}) == 1);
}

TEST_CASE("inadmissible run data exits with the numerical-failure status") {
  const fs::path root = fresh_root("numerical");
  // A slice wider than the admissible angular span is refused outright.
  CHECK(run_args({"evolve", "--delta", "1e-2", "--u-star", "50", "--nu", "16",
                  "--t-end", "1.2", "--out", root.string()}) == 1);

  // A run directory whose stored radius grows outward in u parses fine but
  // fails the energy functional's geometry checks.
  const fs::path run_dir = root / "bad_run";
  fs::create_directories(run_dir);
  nlohmann::ordered_json manifest;
  manifest["config"] = {{"gamma", 1.4}, {"order", 2}, {"delta", 0.01}};
  rarefaction::write_json(run_dir / "manifest.json", manifest);
  CsvTable grid;
  grid.columns = {"t", "u", "w", "wbar", "r", "kappa"};
  for (int i = 0; i < 5; ++i) {
    const double t = 1.0 + 0.1 * i;
    for (int j = 0; j < 6; ++j) {
      const double u = 0.1 * j;
      grid.rows.push_back({t, u, 2.5, 2.5, 5.0 + u, 1.0});
    }
  }
  rarefaction::write_csv(run_dir / "grid.csv", grid);
  CHECK(run_args({"diagnose", "--run", run_dir.string(), "--out",
                  root.string(), "--tag", "bad"}) == 2);
}

TEST_CASE("unwritable output locations exit with the io status") {
  const fs::path root = fresh_root("io_error");
  const fs::path blocker = root / "blocker";
  std::ofstream(blocker) << "occupied\n";
  const fs::path bad_out = blocker / "sub";
  CHECK(run_args({"riemann1d", "--out", bad_out.string()}) == 3);
  // A run directory that does not exist surfaces as an io failure too.
  CHECK(run_args({"diagnose", "--run", (root / "missing_run").string(),
                  "--out", root.string()}) == 3);
}

TEST_CASE("riemann1d writes the fan profile and summary manifest") {
  const fs::path root = fresh_root("riemann1d");
  REQUIRE(run_args({"riemann1d", "--c1", "1", "--vp", "1", "--samples", "51",
                    "--out", root.string(), "--tag", "fan"}) == 0);
  const fs::path dir = root / "fan";
  REQUIRE(fs::exists(dir / "fan.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "fan.gp"));

  const auto manifest = read_json(dir / "manifest.json");
  CHECK(manifest.at("command").get<std::string>() == "riemann1d");
  CHECK(manifest.at("config").at("gamma").get<double>() ==
        doctest::Approx(1.4));
  const auto& results = manifest.at("results");
  // Head edge at c1 - (gamma+1) vp / 2, tail edge at the undisturbed c1.
  CHECK(results.at("xi_head").get<double>() ==
        doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(results.at("xi_tail").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(results.at("reaches_vacuum").get<bool>());
  CHECK(results.at("head_state").at("c").get<double>() ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(results.at("head_state").at("v").get<double>() ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(results.at("tail_state").at("c").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(results.at("tail_state").at("v").get<double>() ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  const CsvTable fan = read_csv(dir / "fan.csv");
  REQUIRE(fan.columns ==
          std::vector<std::string>{"xi", "c", "v", "w", "wbar"});
  REQUIRE(fan.rows.size() == 51);
  // The outgoing invariant is constant across the whole fan.
  for (const auto& row : fan.rows)
    CHECK(std::abs(row[3] - 2.5) <= 1e-14);
  CHECK(fan.rows.front()[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(fan.rows.front()[2] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fan.rows.back()[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fan.rows.back()[2]) <= 1e-12);
}

TEST_CASE("boundary run records curve columns and near-corner exponents") {
  const fs::path root = fresh_root("boundary");
  REQUIRE(run_args({"boundary", "--order", "3", "--t-end", "3", "--step",
                    "1e-3", "--out", root.string()}) == 0);
  const fs::path dir = root / "boundary";  // tag defaults to the subcommand
  REQUIRE(fs::exists(dir / "boundary.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "boundary.gp"));

  const auto manifest = read_json(dir / "manifest.json");
  const auto& results = manifest.at("results");
  CHECK(results.at("order").get<int>() == 3);
  CHECK(results.at("t_last").get<double>() == doctest::Approx(3.0));
  CHECK(results.at("kappa_last").get<double>() ==
        doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(results.at("transport_identity_gap").get<double>() <= 1e-10);

  const auto& fits = results.at("vanishing_orders");
  REQUIRE(fits.is_array());
  REQUIRE(fits.size() >= 4);
  bool saw_exponent = false;
  for (const auto& fit : fits) {
    CHECK(fit.contains("column"));
    CHECK(fit.contains("target"));
    if (!fit.at("exact_zero").get<bool>()) {
      CHECK(fit.contains("exponent"));
      saw_exponent = true;
    }
  }
  CHECK(saw_exponent);

  const CsvTable curve = read_csv(dir / "boundary.csv");
  REQUIRE(curve.columns.size() >= 8);
  CHECK(curve.columns[0] == "t");
  CHECK(curve.rows.size() ==
        results.at("rows_written").get<std::size_t>());
}

TEST_CASE("evolve writes grid, step history, and residual summary") {
  const fs::path dir = shared_evolve_dir();
  REQUIRE(fs::exists(dir / "grid.csv"));
  REQUIRE(fs::exists(dir / "cfl.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "cfl.gp"));

  const auto manifest = read_json(dir / "manifest.json");
  CHECK(manifest.at("command").get<std::string>() == "evolve");
  CHECK(manifest.at("config").at("u_star").get<double>() ==
        doctest::Approx(0.4));
  const auto& results = manifest.at("results");
  CHECK(results.at("steps").get<long long>() >= 100);
  CHECK(results.at("t_first").get<double>() ==
        doctest::Approx(1.01).epsilon(1e-9));
  CHECK(results.at("t_last").get<double>() ==
        doctest::Approx(1.6).epsilon(1e-9));
  CHECK(results.at("dt_min").get<double>() > 0.0);
  CHECK(results.at("kappa_consistency_max").get<double>() <= 1e-3);
  CHECK(results.at("wbar_pin_gap_max").get<double>() <= 1e-9);
  const auto& res = results.at("residuals");
  CHECK(res.at("max_wbar").get<double>() > 0.0);
  CHECK(res.at("max_wbar").get<double>() <= 1e-3);
  CHECK(res.at("max_w").get<double>() <= 1e-3);
  CHECK(res.at("max_r").get<double>() <= 1e-3);

  const CsvTable grid = read_csv(dir / "grid.csv");
  REQUIRE(grid.columns ==
          std::vector<std::string>{"t", "u", "w", "wbar", "r", "kappa", "c",
                                   "v"});
  // Each stored time slice contributes one CSV row per u node (nu cells
  // means nu + 1 nodes).
  CHECK(grid.rows.size() % 25 == 0);
  CHECK(grid.rows.size() >= 25 * 4);

  const CsvTable cfl = read_csv(dir / "cfl.csv");
  REQUIRE(cfl.columns ==
          std::vector<std::string>{"t", "dt", "kappa_min", "c_max"});
  CHECK(cfl.rows.size() >= 50);
}

TEST_CASE("identical evolve invocations produce identical outputs") {
  const fs::path root_a = fresh_root("determinism_a");
  const fs::path root_b = fresh_root("determinism_b");
  const std::vector<std::string> flags = {
      "evolve", "--delta", "1e-2",  "--order", "2",   "--u-star", "0.3",
      "--nu",   "16",      "--t-end", "1.3"};
  auto run_into = [&](const fs::path& root) {
    std::vector<std::string> storage{"rarefaction"};
    storage.insert(storage.end(), flags.begin(), flags.end());
    storage.push_back("--out");
    storage.push_back(root.string());
    std::vector<const char*> argv;
    for (const std::string& s : storage) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  };
  REQUIRE(run_into(root_a) == 0);
  REQUIRE(run_into(root_b) == 0);
  const fs::path dir_a = root_a / "evolve";
  const fs::path dir_b = root_b / "evolve";
  CHECK(slurp(dir_a / "grid.csv") == slurp(dir_b / "grid.csv"));
  CHECK(slurp(dir_a / "cfl.csv") == slurp(dir_b / "cfl.csv"));
  // The manifest echoes physics configuration only, so it matches bytewise.
  CHECK(slurp(dir_a / "manifest.json") == slurp(dir_b / "manifest.json"));
}

TEST_CASE("config files preload subcommand options") {
  const fs::path root = fresh_root("config_file");
  const fs::path ini = root / "run.ini";
  std::ofstream(ini) << "[riemann1d]\n"
                        "gamma=3.0\n"
                        "c1=2.0\n"
                        "vp=0.5\n";
  REQUIRE(run_args({"--config", ini.string(), "riemann1d", "--out",
                    root.string(), "--tag", "cfg"}) == 0);
  const auto manifest = read_json(root / "cfg" / "manifest.json");
  CHECK(manifest.at("config").at("gamma").get<double>() ==
        doctest::Approx(3.0));
  CHECK(manifest.at("config").at("vp").get<double>() == doctest::Approx(0.5));
  // Head edge from the configured state: c1 - (gamma+1) vp / 2 = 1.
  CHECK(manifest.at("results").at("xi_head").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  // An explicit flag still overrides the file.
  REQUIRE(run_args({"--config", ini.string(), "riemann1d", "--vp", "1.0",
                    "--out", root.string(), "--tag", "cfg2"}) == 0);
  const auto manifest2 = read_json(root / "cfg2" / "manifest.json");
  CHECK(manifest2.at("config").at("vp").get<double>() == doctest::Approx(1.0));
  CHECK(manifest2.at("results").at("xi_head").get<double>() ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("diagnose summarizes an existing run directory") {
  const fs::path run_dir = shared_evolve_dir();
  const fs::path root = fresh_root("diagnose");
  REQUIRE(run_args({"diagnose", "--run", run_dir.string(), "--out",
                    root.string()}) == 0);
  const fs::path dir = root / "diagnose";
  REQUIRE(fs::exists(dir / "diagnose.json"));
  CHECK(fs::exists(dir / "run0_kappa_trace.csv"));
  CHECK(fs::exists(dir / "run0_energy.csv"));
  CHECK(fs::exists(dir / "run0_flux.csv"));

  const auto report = read_json(dir / "diagnose.json");
  CHECK(report.at("command").get<std::string>() == "diagnose");
  const auto& runs = report.at("runs");
  REQUIRE(runs.is_array());
  REQUIRE(runs.size() == 1);
  const auto& run0 = runs.at(0);
  CHECK(run0.at("t_last").get<double>() == doctest::Approx(1.6));
  CHECK(run0.at("rows").get<std::size_t>() >= 4);
  // A run this short cannot support a growth fit; the section records why.
  CHECK(run0.at("kappa").at("skipped").get<bool>());
  const auto& energies = run0.at("energy");
  REQUIRE(energies.is_array());
  REQUIRE(!energies.empty());
  for (const auto& entry : energies) {
    CHECK(std::isfinite(entry.at("sup_E").get<double>()));
    CHECK(entry.at("sup_E").get<double>() >= 0.0);
  }

  // Section flags restrict the report.
  const fs::path root_k = fresh_root("diagnose_kappa");
  REQUIRE(run_args({"diagnose", "--run", run_dir.string(), "--kappa", "--out",
                    root_k.string()}) == 0);
  const auto report_k = read_json(root_k / "diagnose" / "diagnose.json");
  const auto& run_k = report_k.at("runs").at(0);
  CHECK(run_k.contains("kappa"));
  CHECK(!run_k.contains("energy"));
}

TEST_CASE("sweep halves the start offset and reports the convergence table") {
  const fs::path root = fresh_root("sweep");
  REQUIRE(run_args({"sweep", "--halvings", "3", "--delta", "8e-3", "--order",
                    "2", "--u-star", "0.3", "--nu", "16", "--t-end", "1.3",
                    "--out", root.string()}) == 0);
  const fs::path dir = root / "sweep";
  REQUIRE(fs::exists(dir / "convergence.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "convergence.gp"));

  const auto manifest = read_json(dir / "manifest.json");
  const auto& results = manifest.at("results");
  CHECK(results.at("halvings").get<int>() == 3);
  // Three halvings of the start offset give four runs: three consecutive
  // gaps and two gap ratios.
  const auto& diff = results.at("diff");
  const auto& ratio = results.at("ratio");
  REQUIRE(diff.size() == 3);
  REQUIRE(ratio.size() == 2);
  for (const auto& d : diff) CHECK(d.get<double>() > 0.0);
  // Halving the start offset shrinks the run-to-run gap.
  CHECK(ratio.at(0).get<double>() < 0.9);
  CHECK(ratio.at(1).get<double>() < 0.9);
  CHECK(std::isfinite(results.at("fitted_order").get<double>()));
  CHECK(results.at("window_t_hi").get<double>() == doctest::Approx(1.3));
}

TEST_CASE("verify battery passes end to end") {
  const fs::path root = fresh_root("verify");
  REQUIRE(run_args({"verify", "--out", root.string()}) == 0);
  const auto report = read_json(root / "verify" / "verify.json");
  CHECK(report.at("all_pass").get<bool>());
  const auto& checks = report.at("checks");
  REQUIRE(checks.is_array());
  REQUIRE(checks.size() == 8);
  for (const auto& check : checks)
    CHECK_MESSAGE(check.at("pass").get<bool>(),
                  check.at("name").get<std::string>());
}
