// `evolve`: slice data at 1 + delta, march to t_end, store grid + manifest.
#include <algorithm>
#include <cmath>
#include <utility>

#include "rarefaction/boundary_data.hpp"
#include "rarefaction/cli.hpp"
#include "rarefaction/io.hpp"
#include "rarefaction/version.hpp"

namespace rarefaction {

namespace {

std::vector<double> make_u_grid(const RunConfig& cfg) {
  const double us = cfg.resolved_u_star();
  std::vector<double> u(cfg.nu + 1);
  for (int j = 0; j <= cfg.nu; ++j) u[j] = us * j / cfg.nu;
  return u;
}

}  // namespace

BoundaryDataTable build_pin_table(
    const std::shared_ptr<const BackgroundProvider>& provider, double fine_end,
    double fine_step, double t_end) {
  const double coarse_step = 1e-2;
  const double pin_end = t_end + 3.0 * coarse_step;
  std::vector<StepSegment> pin_segments;
  if (pin_end <= fine_end) {
    pin_segments = {StepSegment{pin_end + 2.0 * fine_step, fine_step}};
  } else {
    pin_segments = {StepSegment{fine_end, fine_step},
                    StepSegment{pin_end, coarse_step}};
  }
  return solve_c0(provider, 1, pin_segments);
}

EvolveResult run_evolve_pipeline(const RunConfig& cfg,
                                 const BoundaryDataTable& table_data,
                                 const BoundaryDataTable& table_pin) {
  cfg.validate();
  const std::vector<double> u_grid = make_u_grid(cfg);
  const TaylorData data =
      build_taylor_data(table_data, cfg.delta, cfg.order, u_grid);
  MarchOptions opts;
  EvolveResult out{march(data, table_pin, cfg.t_end, cfg.dt_max, opts), {}};
  out.res = residuals(out.grid);
  return out;
}

EvolveResult run_evolve_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const auto provider = make_provider(cfg);

  // A fine near-corner table feeds the slice polynomials; a long order-1
  // table pins the u = 0 column over the whole march.
  const double fine_end = 1.0 + 10.0 * cfg.delta;
  const double fine_step = cfg.delta / 20.0;
  const BoundaryDataTable table_data =
      solve_c0(provider, cfg.order, fine_end, fine_step);
  const BoundaryDataTable table_pin =
      build_pin_table(provider, fine_end, fine_step, cfg.t_end);
  return run_evolve_pipeline(cfg, table_data, table_pin);
}

void write_evolve_outputs(const RunConfig& cfg, const EvolveResult& result,
                          const std::filesystem::path& dir) {
  const AcousticalGrid& grid = result.grid;
  CsvTable csv;
  csv.columns = {"t", "u", "w", "wbar", "r", "kappa", "c", "v"};
  const std::size_t stride = std::max<std::size_t>(1, grid.t.size() / 200);
  for (std::size_t i = 0; i < grid.t.size(); ++i) {
    if (i % stride != 0 && i + 1 != grid.t.size()) continue;
    for (std::size_t j = 0; j < grid.u.size(); ++j) {
      csv.rows.push_back({grid.t[i], grid.u[j], grid.w[i][j], grid.wbar[i][j],
                          grid.r[i][j], grid.kappa[i][j], grid.c_at(i, j),
                          grid.v_at(i, j)});
    }
  }
  write_csv(dir / "grid.csv", csv);

  CsvTable cfl;
  cfl.columns = {"t", "dt", "kappa_min", "c_max"};
  for (std::size_t i = 0; i < grid.cfl_t.size(); ++i)
    cfl.rows.push_back({grid.cfl_t[i], grid.cfl_dt[i], grid.cfl_kappa_min[i],
                        grid.cfl_c_max[i]});
  write_csv(dir / "cfl.csv", cfl);

  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "evolve";
  manifest["config"] = cfg.to_json();
  nlohmann::ordered_json results;
  results["steps"] = grid.steps;
  results["rows_stored"] = grid.t.size();
  results["t_first"] = grid.t.front();
  results["t_last"] = grid.t.back();
  results["dt_min"] = grid.dt_min;
  results["dt_max"] = grid.dt_max;
  results["kappa_consistency_max"] = grid.kappa_consistency_max;
  results["wbar_pin_gap_max"] = grid.wbar_pin_gap_max;
  nlohmann::ordered_json res;
  res["max_wbar"] = result.res.max_wbar;
  res["rms_wbar"] = result.res.rms_wbar;
  res["max_r"] = result.res.max_r;
  res["rms_r"] = result.res.rms_r;
  res["max_w"] = result.res.max_w;
  res["rms_w"] = result.res.rms_w;
  results["residuals"] = std::move(res);
  manifest["results"] = std::move(results);
  write_json(dir / "manifest.json", manifest);

  PlotSpec plot;
  plot.title = "march step history";
  plot.xlabel = "t";
  plot.ylabel = "dt";
  plot.logx = true;
  plot.logy = true;
  plot.csv_file = "cfl.csv";
  plot.series = {{"t", "dt", "accepted step"}};
  write_plot_script(dir / "cfl.gp", plot);
}

int cmd_evolve(const RunConfig& cfg) {
  const EvolveResult result = run_evolve_pipeline(cfg);
  const std::filesystem::path dir = command_output_dir(cfg, "evolve");
  write_evolve_outputs(cfg, result, dir);
  return 0;
}

}  // namespace rarefaction
