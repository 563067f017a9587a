#include "rarefaction/cli.hpp"

#include <cstdio>
#include <exception>

#include <CLI/CLI.hpp>

#include "rarefaction/errors.hpp"
#include "rarefaction/io.hpp"
#include "rarefaction/version.hpp"

namespace rarefaction {

namespace {

void add_common_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--gamma", cfg.gamma, "adiabatic exponent (> 1)")
      ->capture_default_str();
  app->add_option("--background", cfg.background,
                  "background kind: constant | perturbed")
      ->capture_default_str();
  app->add_option("--epsilon", cfg.epsilon, "perturbation amplitude scale")
      ->capture_default_str();
  app->add_option("--delta-exp", cfg.delta_exp,
                  "perturbation decay-loss exponent in (0, 1/2)")
      ->capture_default_str();
  app->add_option("--seed", cfg.seed, "perturbation phase seed")
      ->capture_default_str();
  app->add_option("--out", cfg.output_dir,
                  "output root (else RAREFACTION_OUTPUT_ROOT, else ./out)");
  app->add_option("--tag", cfg.tag, "output subdirectory name");
}

void add_march_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--delta", cfg.delta, "start offset past the corner")
      ->capture_default_str();
  app->add_option("--order", cfg.order, "Taylor/boundary order N")
      ->capture_default_str();
  app->add_option("--u-star", cfg.u_star, "u range (<= 0: auto)")
      ->capture_default_str();
  app->add_option("--nu", cfg.nu, "u intervals")->capture_default_str();
  app->add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
  app->add_option("--s", cfg.s, "global multiplier weight exponent")
      ->capture_default_str();
  app->add_option("--step", cfg.step, "boundary table RK4 step")
      ->capture_default_str();
  app->add_option("--dt-max", cfg.dt_max, "march step cap")
      ->capture_default_str();
}

}  // namespace

std::filesystem::path command_output_dir(const RunConfig& cfg,
                                         const std::string& subcommand) {
  const std::filesystem::path root = resolve_output_root(cfg.output_dir);
  const std::string tag = cfg.tag.empty() ? subcommand : cfg.tag;
  const std::filesystem::path dir = root / tag;
  ensure_dir(dir);
  return dir;
}

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  DiagnoseArgs diag;
  int halvings = 3;

  CLI::App app{
      "Spherical rarefaction-wave construction: boundary data, slice "
      "polynomials, characteristic march, diagnostics"};
  app.set_config("--config", "", "read options from a config file");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CLI::App* rie = app.add_subcommand(
      "riemann1d", "sample the 1-D piston fan in similarity form");
  add_common_options(rie, cfg);
  rie->add_option("--c1", cfg.c1, "quiet-side sound speed")
      ->capture_default_str();
  rie->add_option("--vp", cfg.vp, "piston recession speed")
      ->capture_default_str();
  rie->add_option("--samples", cfg.samples, "fan sample count")
      ->capture_default_str();

  CLI::App* bnd = app.add_subcommand(
      "boundary", "solve the boundary-curve ODE hierarchy");
  add_common_options(bnd, cfg);
  add_march_options(bnd, cfg);

  CLI::App* evo = app.add_subcommand(
      "evolve", "march the characteristic system from slice data");
  add_common_options(evo, cfg);
  add_march_options(evo, cfg);

  CLI::App* dia = app.add_subcommand(
      "diagnose", "energy, growth, and convergence reports from stored runs");
  add_common_options(dia, cfg);
  add_march_options(dia, cfg);
  dia->add_option("--run", diag.runs, "evolve output directory (repeatable)")
      ->required();
  dia->add_flag("--kappa", diag.kappa, "only the growth-fit section");
  dia->add_flag("--energy", diag.energy, "only the energy section");

  CLI::App* swp = app.add_subcommand(
      "sweep", "start-offset halving family plus convergence table");
  add_common_options(swp, cfg);
  add_march_options(swp, cfg);
  swp->add_option("--halvings", halvings, "number of offset halvings (>= 3)")
      ->capture_default_str();

  CLI::App* ver = app.add_subcommand(
      "verify", "internal consistency battery; nonzero exit on failure");
  add_common_options(ver, cfg);
  add_march_options(ver, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (rie->parsed()) return cmd_riemann1d(cfg);
    if (bnd->parsed()) return cmd_boundary(cfg);
    if (evo->parsed()) return cmd_evolve(cfg);
    if (dia->parsed()) return cmd_diagnose(cfg, diag);
    if (swp->parsed()) return cmd_sweep(cfg, halvings);
    if (ver->parsed()) return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace rarefaction
