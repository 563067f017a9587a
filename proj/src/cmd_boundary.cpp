// `boundary`: solve the curve ODE hierarchy and store the column table.
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rarefaction/boundary_data.hpp"
#include "rarefaction/cli.hpp"
#include "rarefaction/io.hpp"
#include "rarefaction/version.hpp"

namespace rarefaction {

int cmd_boundary(const RunConfig& cfg) {
  cfg.validate();
  const auto provider = make_provider(cfg);
  const BoundaryDataTable table =
      solve_c0(provider, cfg.order, cfg.t_end, cfg.step);
  const std::filesystem::path dir = command_output_dir(cfg, "boundary");

  CsvTable csv;
  csv.columns = {"t", "w", "wbar", "r", "c", "v", "Lw", "Lwbar"};
  for (int n = 1; n <= table.order; ++n) {
    csv.columns.push_back("T" + std::to_string(n) + "w");
    csv.columns.push_back("T" + std::to_string(n) + "wbar");
    csv.columns.push_back("T" + std::to_string(n - 1) + "kappa");
    csv.columns.push_back("LT" + std::to_string(n) + "w");
    csv.columns.push_back("LT" + std::to_string(n) + "wbar");
    csv.columns.push_back("LT" + std::to_string(n - 1) + "kappa");
  }
  const std::size_t stride =
      std::max<std::size_t>(1, table.t.size() / 5000);
  double invariant_gap = 0.0;
  const GammaLaw eos(table.gamma);
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    for (int n = 1; n <= table.order; ++n) {
      const double lhs = table.LTkappa[n - 1][i];
      const double rhs = -eos.gp1() / 2.0 * table.Twbar[n - 1][i] +
                         (3.0 - eos.gamma()) / 2.0 * table.Tw[n - 1][i];
      invariant_gap = std::max(invariant_gap, std::abs(lhs - rhs));
    }
    if (i % stride != 0 && i + 1 != table.t.size()) continue;
    std::vector<double> row = {table.t[i], table.w[i],  table.wbar[i],
                               table.r[i], table.c[i],  table.v[i],
                               table.Lw[i], table.Lwbar[i]};
    for (int n = 1; n <= table.order; ++n) {
      row.push_back(table.Tw[n - 1][i]);
      row.push_back(table.Twbar[n - 1][i]);
      row.push_back(table.Tkappa[n - 1][i]);
      row.push_back(table.LTw[n - 1][i]);
      row.push_back(table.LTwbar[n - 1][i]);
      row.push_back(table.LTkappa[n - 1][i]);
    }
    csv.rows.push_back(std::move(row));
  }
  write_csv(dir / "boundary.csv", csv);

  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "boundary";
  manifest["config"] = cfg.to_json();
  nlohmann::ordered_json results;
  results["order"] = table.order;
  results["rows_total"] = table.t.size();
  results["rows_written"] = csv.rows.size();
  results["t_first"] = table.t.front();
  results["t_last"] = table.t.back();
  results["transport_identity_gap"] = invariant_gap;
  results["kappa_last"] = table.kappa().back();

  // Near-corner fit of the leading powers of local time per column, from a
  // dedicated geometric grid (the linear-step table starts too coarse for it).
  const BoundaryDataTable corner =
      solve_c0_geometric(provider, table.order, 1e-6, 1e-2, 64);
  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  for (const VanishingFit& fit : vanishing_orders(corner)) {
    nlohmann::ordered_json one;
    one["column"] = fit.column;
    one["target"] = fit.target;
    one["exact_zero"] = fit.exact_zero;
    if (!fit.exact_zero) {
      one["exponent"] = fit.exponent;
      one["prefactor"] = fit.prefactor;
    }
    fits.push_back(std::move(one));
  }
  results["vanishing_orders"] = std::move(fits);
  manifest["results"] = std::move(results);
  write_json(dir / "manifest.json", manifest);

  PlotSpec plot;
  plot.title = "boundary-curve columns";
  plot.xlabel = "t";
  plot.ylabel = "value";
  plot.logx = true;
  plot.csv_file = "boundary.csv";
  plot.series = {{"t", "T0kappa", "kappa"}, {"t", "T1wbar", "first ingoing column"}};
  write_plot_script(dir / "boundary.gp", plot);
  return 0;
}

}  // namespace rarefaction
