// `riemann1d`: sample the closed-form piston fan and record its edges.
#include <utility>

#include "rarefaction/cli.hpp"
#include "rarefaction/io.hpp"
#include "rarefaction/riemann1d.hpp"
#include "rarefaction/version.hpp"

namespace rarefaction {

int cmd_riemann1d(const RunConfig& cfg) {
  cfg.validate();
  const GammaLaw eos(cfg.gamma);
  const PistonProblem prob(cfg.c1, cfg.vp, eos);
  const auto edges = fan_edges(prob);
  const std::filesystem::path dir = command_output_dir(cfg, "riemann1d");

  CsvTable table;
  table.columns = {"xi", "c", "v", "w", "wbar"};
  for (int i = 0; i < cfg.samples; ++i) {
    const double xi =
        edges[0] + (edges[1] - edges[0]) * i / (cfg.samples - 1.0);
    const FluidState st = fan_state(xi, prob);
    const InvariantPair inv = fan_invariants(xi, prob);
    table.rows.push_back({xi, st.c, st.v, inv.w, inv.wbar});
  }
  write_csv(dir / "fan.csv", table);

  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "riemann1d";
  manifest["config"] = cfg.to_json();
  nlohmann::ordered_json results;
  results["xi_head"] = edges[0];
  results["xi_tail"] = edges[1];
  results["reaches_vacuum"] = prob.reaches_vacuum;
  const FluidState head = fan_state(edges[0], prob);
  const FluidState tail = fan_state(edges[1], prob);
  results["head_state"] = {{"c", head.c}, {"v", head.v}};
  results["tail_state"] = {{"c", tail.c}, {"v", tail.v}};
  manifest["results"] = std::move(results);
  write_json(dir / "manifest.json", manifest);

  PlotSpec plot;
  plot.title = "1-D fan profiles";
  plot.xlabel = "xi";
  plot.ylabel = "value";
  plot.csv_file = "fan.csv";
  plot.series = {{"xi", "c", "sound speed"}, {"xi", "v", "velocity"}};
  write_plot_script(dir / "fan.gp", plot);
  return 0;
}

}  // namespace rarefaction
