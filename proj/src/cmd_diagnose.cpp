// `diagnose`: post-process stored march grids — growth-rate fits, weighted
// energies and fluxes, and cross-run convergence.
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rarefaction/cli.hpp"
#include "rarefaction/diagnostics.hpp"
#include "rarefaction/errors.hpp"
#include "rarefaction/io.hpp"
#include "rarefaction/version.hpp"

namespace rarefaction {

namespace {

struct LoadedRun {
  std::string dir;
  AcousticalGrid grid;
  int order = 1;
  double delta = 0.0;
};

std::size_t column_index(const CsvTable& csv, const std::string& name,
                         const std::string& file) {
  const auto it = std::find(csv.columns.begin(), csv.columns.end(), name);
  if (it == csv.columns.end())
    throw IoError(file + ": missing column '" + name + "'");
  return static_cast<std::size_t>(it - csv.columns.begin());
}

LoadedRun load_run(const std::string& dir_str) {
  const std::filesystem::path dir(dir_str);
  LoadedRun run;
  run.dir = dir_str;

  const nlohmann::ordered_json manifest = read_json(dir / "manifest.json");
  if (!manifest.contains("config"))
    throw IoError(dir_str + "/manifest.json: missing 'config'");
  const auto& config = manifest.at("config");
  run.grid.gamma = config.at("gamma").get<double>();
  run.order = config.at("order").get<int>();
  run.delta = config.at("delta").get<double>();
  if (!(run.grid.gamma > 1.0))
    throw IoError(dir_str + "/manifest.json: gamma must exceed 1");

  const std::string grid_file = (dir / "grid.csv").string();
  const CsvTable csv = read_csv(dir / "grid.csv");
  const std::size_t ct = column_index(csv, "t", grid_file);
  const std::size_t cu = column_index(csv, "u", grid_file);
  const std::size_t cw = column_index(csv, "w", grid_file);
  const std::size_t cwb = column_index(csv, "wbar", grid_file);
  const std::size_t cr = column_index(csv, "r", grid_file);
  const std::size_t ck = column_index(csv, "kappa", grid_file);
  if (csv.rows.empty()) throw IoError(grid_file + ": no data rows");

  // Rows sharing one t value form a stored time slice.
  AcousticalGrid& g = run.grid;
  std::size_t i = 0;
  while (i < csv.rows.size()) {
    const double t = csv.rows[i][ct];
    std::vector<double> u, w, wbar, r, kappa;
    while (i < csv.rows.size() && csv.rows[i][ct] == t) {
      u.push_back(csv.rows[i][cu]);
      w.push_back(csv.rows[i][cw]);
      wbar.push_back(csv.rows[i][cwb]);
      r.push_back(csv.rows[i][cr]);
      kappa.push_back(csv.rows[i][ck]);
      ++i;
    }
    if (g.t.empty()) {
      if (u.size() < 5)
        throw IoError(grid_file + ": slices need at least 5 u nodes");
      if (u.front() != 0.0)
        throw IoError(grid_file + ": u grid must start at 0");
      const double du = u[1] - u[0];
      for (std::size_t j = 1; j < u.size(); ++j)
        if (std::abs(u[j] - u[j - 1] - du) > 1e-9 * du)
          throw IoError(grid_file + ": u grid must be uniform");
      g.u = u;
    } else {
      if (u != g.u)
        throw IoError(grid_file + ": slices disagree on the u grid");
      if (t <= g.t.back())
        throw IoError(grid_file + ": slice times must increase");
    }
    g.t.push_back(t);
    g.w.push_back(std::move(w));
    g.wbar.push_back(std::move(wbar));
    g.r.push_back(std::move(r));
    g.kappa.push_back(std::move(kappa));
  }
  if (g.t.size() < 3)
    throw IoError(grid_file + ": need at least 3 stored slices");
  return run;
}

std::string combo_name(PsiField field, MultiplierKind kind, int n) {
  return std::string(to_string(field)) + "_" + to_string(kind) + "_n" +
         std::to_string(n);
}

}  // namespace

int cmd_diagnose(const RunConfig& cfg, const DiagnoseArgs& args) {
  cfg.validate();
  if (args.runs.empty()) throw ConfigError("diagnose needs at least one --run");
  const bool all_sections = !args.kappa && !args.energy;
  const bool do_kappa = all_sections || args.kappa;
  const bool do_energy = all_sections || args.energy;

  const std::filesystem::path dir = command_output_dir(cfg, "diagnose");

  std::vector<LoadedRun> runs;
  runs.reserve(args.runs.size());
  for (const std::string& rd : args.runs) runs.push_back(load_run(rd));

  nlohmann::ordered_json report;
  report["version"] = kVersion;
  report["command"] = "diagnose";
  report["config"] = cfg.to_json();
  nlohmann::ordered_json run_reports = nlohmann::ordered_json::array();

  for (std::size_t ri = 0; ri < runs.size(); ++ri) {
    const LoadedRun& run = runs[ri];
    const AcousticalGrid& g = run.grid;
    const std::string prefix = "run" + std::to_string(ri);
    nlohmann::ordered_json rj;
    rj["dir"] = run.dir;
    rj["gamma"] = g.gamma;
    rj["order"] = run.order;
    rj["start_offset"] = run.delta;
    rj["t_first"] = g.t.front();
    rj["t_last"] = g.t.back();
    rj["rows"] = g.t.size();

    if (do_kappa) {
      nlohmann::ordered_json kj;
      if (g.t.back() >= 100.0) {
        const KappaGrowthReport fit = kappa_growth(g);
        kj["skipped"] = false;
        kj["t_lo"] = fit.t_lo;
        kj["t_hi"] = fit.t_hi;
        kj["alpha_min"] =
            *std::min_element(fit.alpha.begin(), fit.alpha.end());
        kj["alpha_max"] =
            *std::max_element(fit.alpha.begin(), fit.alpha.end());
        kj["alpha_last"] = fit.alpha.back();
        kj["beta_last"] = fit.beta.back();

        CsvTable fit_csv;
        fit_csv.columns = {"u", "alpha", "beta"};
        for (std::size_t j = 0; j < fit.u.size(); ++j)
          fit_csv.rows.push_back({fit.u[j], fit.alpha[j], fit.beta[j]});
        write_csv(dir / (prefix + "_kappa_fit.csv"), fit_csv);
      } else {
        kj["skipped"] = true;
        kj["reason"] = "growth fit needs the run to reach t = 100";
      }

      CsvTable trace;
      trace.columns = {"t", "ln_t", "kappa_mid", "kappa_last"};
      const std::size_t jm = g.u.size() / 2;
      const std::size_t jl = g.u.size() - 1;
      for (std::size_t i = 0; i < g.t.size(); ++i)
        trace.rows.push_back({g.t[i], std::log(g.t[i]), g.kappa[i][jm],
                              g.kappa[i][jl]});
      write_csv(dir / (prefix + "_kappa_trace.csv"), trace);

      PlotSpec plot;
      plot.title = "inverse foliation density vs log time";
      plot.xlabel = "ln t";
      plot.ylabel = "kappa";
      plot.csv_file = prefix + "_kappa_trace.csv";
      plot.series = {{"ln_t", "kappa_mid", "middle u node"},
                     {"ln_t", "kappa_last", "outer u node"}};
      write_plot_script(dir / (prefix + "_kappa.gp"), plot);
      rj["kappa"] = std::move(kj);
    }

    if (do_energy) {
      const int n_max = std::min(3, run.order);
      std::vector<EnergyReport> reports;
      for (int n = 0; n <= n_max; ++n) {
        reports.push_back(energy(g, PsiField::w, n, MultiplierKind::local));
        reports.push_back(
            energy(g, PsiField::w, n, MultiplierKind::global_w, cfg.s));
        reports.push_back(energy(g, PsiField::wbar, n, MultiplierKind::local));
        reports.push_back(
            energy(g, PsiField::wbar, n, MultiplierKind::global_wbar, cfg.s));
      }

      CsvTable ecsv, fcsv;
      ecsv.columns = {"t"};
      fcsv.columns = {"u"};
      for (const EnergyReport& er : reports) {
        ecsv.columns.push_back("E_" + combo_name(er.field, er.kind, er.n));
        fcsv.columns.push_back("F_" + combo_name(er.field, er.kind, er.n));
      }
      for (std::size_t i = 0; i < reports.front().t.size(); ++i) {
        std::vector<double> row{reports.front().t[i]};
        for (const EnergyReport& er : reports) row.push_back(er.E[i]);
        ecsv.rows.push_back(std::move(row));
      }
      for (std::size_t j = 0; j < reports.front().u.size(); ++j) {
        std::vector<double> row{reports.front().u[j]};
        for (const EnergyReport& er : reports) row.push_back(er.F[j]);
        fcsv.rows.push_back(std::move(row));
      }
      write_csv(dir / (prefix + "_energy.csv"), ecsv);
      write_csv(dir / (prefix + "_flux.csv"), fcsv);

      nlohmann::ordered_json ej = nlohmann::ordered_json::array();
      for (const EnergyReport& er : reports) {
        nlohmann::ordered_json e;
        e["field"] = to_string(er.field);
        e["kind"] = to_string(er.kind);
        e["n"] = er.n;
        e["s"] = er.s;
        e["E_first"] = er.E.front();
        e["E_last"] = er.E.back();
        e["sup_E"] = er.sup_E;
        e["sup_F"] = er.sup_F;
        e["sup_E_over_t2"] = er.sup_E_over_t2;
        e["fit_valid"] = er.fit_valid;
        e["fit_exponent"] = er.fit_exponent;
        e["fit_constant"] = er.fit_constant;
        ej.push_back(std::move(e));
      }
      rj["energy"] = std::move(ej);

      PlotSpec plot;
      plot.title = "weighted energies";
      plot.xlabel = "t";
      plot.ylabel = "E";
      plot.logx = true;
      plot.csv_file = prefix + "_energy.csv";
      for (std::size_t k = 1; k < ecsv.columns.size(); ++k)
        plot.series.push_back({"t", ecsv.columns[k], ecsv.columns[k]});
      write_plot_script(dir / (prefix + "_energy.gp"), plot);
    }

    run_reports.push_back(std::move(rj));
  }
  report["runs"] = std::move(run_reports);

  if (all_sections && runs.size() >= 3) {
    // The convergence table needs a start-offset halving family; order the
    // grids by decreasing offset and let the validator check the ratios.
    std::vector<std::size_t> idx(runs.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return runs[a].grid.t.front() > runs[b].grid.t.front();
    });
    std::vector<AcousticalGrid> grids;
    for (std::size_t k : idx) grids.push_back(runs[k].grid);

    nlohmann::ordered_json cj;
    try {
      double t_hi = grids.front().t.back();
      for (const AcousticalGrid& g : grids)
        t_hi = std::min(t_hi, g.t.back());
      const DeltaConvergence table = delta_convergence(grids, t_hi);
      cj["skipped"] = false;
      cj["start_offset"] = table.start_offset;
      cj["diff"] = table.diff;
      cj["ratio"] = table.ratio;
      cj["fitted_order"] = table.fitted_order;

      CsvTable csv;
      csv.columns = {"delta", "diff"};
      for (std::size_t k = 0; k + 1 < table.start_offset.size(); ++k)
        csv.rows.push_back({table.start_offset[k], table.diff[k]});
      write_csv(dir / "convergence.csv", csv);
      PlotSpec plot;
      plot.title = "start-offset convergence";
      plot.xlabel = "delta";
      plot.ylabel = "sup difference";
      plot.logx = true;
      plot.logy = true;
      plot.csv_file = "convergence.csv";
      plot.series = {{"delta", "diff", "consecutive-run gap"}};
      write_plot_script(dir / "convergence.gp", plot);
    } catch (const ConfigError& e) {
      cj["skipped"] = true;
      cj["reason"] = e.what();
    }
    report["convergence"] = std::move(cj);
  }

  write_json(dir / "diagnose.json", report);
  return 0;
}

}  // namespace rarefaction
