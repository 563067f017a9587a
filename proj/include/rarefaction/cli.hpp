// Command-line front end: argument parsing, subcommand dispatch, and the
// exit-code contract (1 config, 2 numerical, 3 I/O).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rarefaction/config.hpp"
#include "rarefaction/evolution.hpp"

namespace rarefaction {

int run_cli(int argc, const char* const* argv);

struct DiagnoseArgs {
  std::vector<std::string> runs;  // evolve output directories
  bool kappa = false;             // restrict to the growth-fit section
  bool energy = false;            // restrict to the energy section
};

// Subcommand entry points (exposed for in-process testing). Each validates
// its config, writes its artifacts under the resolved output root, and
// throws Config/Numerical/IoError on failure.
int cmd_riemann1d(const RunConfig& cfg);
int cmd_boundary(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_diagnose(const RunConfig& cfg, const DiagnoseArgs& args);
int cmd_sweep(const RunConfig& cfg, int halvings);
int cmd_verify(const RunConfig& cfg);

// Shared evolve pipeline: boundary tables, slice data, march, residuals.
struct EvolveResult {
  AcousticalGrid grid;
  ResidualReport res;
};
EvolveResult run_evolve_pipeline(const RunConfig& cfg);

// Same pipeline with caller-supplied tables; sweep shares one trace table
// across its runs so table integration error cancels in run differences.
EvolveResult run_evolve_pipeline(const RunConfig& cfg,
                                 const BoundaryDataTable& table_data,
                                 const BoundaryDataTable& table_pin);

// Trace table covering [1, t_end] for u = 0 pinning: fine near the corner,
// coarse afterwards.
BoundaryDataTable build_pin_table(
    const std::shared_ptr<const BackgroundProvider>& provider, double fine_end,
    double fine_step, double t_end);

void write_evolve_outputs(const RunConfig& cfg, const EvolveResult& result,
                          const std::filesystem::path& dir);

std::filesystem::path command_output_dir(const RunConfig& cfg,
                                         const std::string& subcommand);

}  // namespace rarefaction
