// `verify`: self-check battery cross-checking independent code paths against
// closed forms and exact identities; any failure exits with a numerical error.
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rarefaction/background.hpp"
#include "rarefaction/boundary_data.hpp"
#include "rarefaction/cli.hpp"
#include "rarefaction/constant_oracle.hpp"
#include "rarefaction/diagnostics.hpp"
#include "rarefaction/errors.hpp"
#include "rarefaction/io.hpp"
#include "rarefaction/riemann1d.hpp"
#include "rarefaction/version.hpp"

namespace rarefaction {

namespace {

struct Check {
  std::string name;
  double value = 0.0;  // measured gap
  double tol = 0.0;
  bool pass = false;
};

Check make_check(std::string name, double value, double tol) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.tol = tol;
  c.pass = value <= tol;
  return c;
}

// The outgoing invariant must be constant across the fan and the state <->
// invariant maps must invert each other along it.
Check check_fan_roundtrip(const GammaLaw& eos) {
  const PistonProblem prob(1.0, 1.0, eos);
  const auto edges = fan_edges(prob);
  const double w_quiet = prob.c1 / eos.gm1();
  double gap = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double xi = edges[0] + (edges[1] - edges[0]) * k / 40.0;
    const FluidState st = fan_state(xi, prob);
    const InvariantPair inv = fan_invariants(xi, prob);
    gap = std::max(gap, std::abs(inv.w - w_quiet));
    const InvariantPair via_state = to_invariants(st, eos);
    gap = std::max(gap, std::abs(via_state.w - inv.w));
    gap = std::max(gap, std::abs(via_state.wbar - inv.wbar));
    const FluidState back = from_invariants(inv, eos);
    gap = std::max(gap, std::abs(back.c - st.c));
    gap = std::max(gap, std::abs(back.v - st.v));
  }
  return make_check("fan_invariant_roundtrip", gap, 1e-13);
}

// Integrated boundary table against the printed constant-state formulas.
Check check_table_vs_closed_forms(const BoundaryDataTable& table,
                                  const GammaLaw& eos) {
  double gap = 0.0;
  const std::size_t stride = std::max<std::size_t>(1, table.t.size() / 64);
  for (std::size_t i = 0; i < table.t.size(); i += stride) {
    const double t = table.t[i];
    const std::pair<std::string, double> pairs[] = {
        {"Tw", table.Tw[0][i]},      {"Twbar", table.Twbar[0][i]},
        {"kappa", table.Tkappa[0][i]}, {"T2w", table.Tw[1][i]},
        {"T2wbar", table.Twbar[1][i]}, {"Tkappa", table.Tkappa[1][i]}};
    for (const auto& p : pairs) {
      const double ref = closed_form(p.first, t, eos);
      gap = std::max(gap,
                     std::abs(p.second - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  return make_check("boundary_table_vs_closed_forms", gap, 1e-5);
}

// The evolved L T^{n-1} kappa column must match its defining combination of
// same-row T^n columns (linear transport relation).
Check check_transport_identity(const BoundaryDataTable& table) {
  const double gp1 = table.gamma + 1.0;
  const double c3g = 3.0 - table.gamma;
  double gap = 0.0;
  for (int n = 1; n <= table.order; ++n) {
    for (std::size_t i = 0; i < table.t.size(); ++i) {
      const double rhs = -0.5 * gp1 * table.Twbar[n - 1][i] +
                         0.5 * c3g * table.Tw[n - 1][i];
      gap = std::max(gap, std::abs(table.LTkappa[n - 1][i] - rhs));
    }
  }
  return make_check("transport_identity_gap", gap, 1e-12);
}

Check check_balance_refinement(MultiplierKind kind, double s) {
  const ManufacturedField field = standard_manufactured_field();
  const double d1 =
      std::abs(balance_defect(field, kind, s, 1.3, 2.1, 0.2, 0.9, 48, 40)
                   .defect);
  const double d2 =
      std::abs(balance_defect(field, kind, s, 1.3, 2.1, 0.2, 0.9, 96, 80)
                   .defect);
  // Second-order quadrature: halving the panel size must cut the defect by
  // at least 3 (4 up to lower-order edge effects), unless already at noise.
  const double value = d2 <= 1e-12 ? 0.0 : d2 / d1;
  return make_check(std::string("balance_defect_refinement_") +
                        to_string(kind),
                    value, 1.0 / 3.0);
}

// d/dt of the closed-form power-log integral must reproduce the integrand.
Check check_power_log_derivative() {
  const int cases[][2] = {{1, 0}, {1, 2}, {2, 1}, {3, 3}};
  const double t = 3.7, h = 1e-4;
  double gap = 0.0;
  for (const auto& ab : cases) {
    const int a = ab[0], b = ab[1];
    const double num = (integrate_power_log(a, b, t + h) -
                        integrate_power_log(a, b, t - h)) /
                       (2.0 * h);
    const double ref = std::pow(t, -a) * std::pow(std::log(t), b);
    gap = std::max(gap, std::abs(num - ref));
  }
  return make_check("power_log_integral_derivative", gap, 1e-6);
}

// For the constant state the curve radius equals t exactly.
Check check_curve_integration(const GammaLaw& eos) {
  const auto provider = constant_background(eos);
  const SampledCurve curve = integrate_C0(*provider, 1.0, 5.0, 0.1);
  double gap = 0.0;
  for (std::size_t i = 0; i < curve.t.size(); ++i)
    gap = std::max(gap, std::abs(curve.r[i] - curve.t[i]));
  return make_check("curve_integration_constant_exact", gap, 1e-12);
}

Check check_constant_jets(const GammaLaw& eos) {
  const auto provider = constant_background(eos);
  std::vector<double> jc, jv, jr;
  provider->jets(2.5, 4, jc, jv, jr);
  double gap = std::max(std::abs(jc[0] - 1.0), std::abs(jr[0] - 2.5));
  gap = std::max(gap, std::abs(jr[1] - 1.0));
  for (int n = 0; n <= 4; ++n) {
    gap = std::max(gap, std::abs(jv[n]));
    if (n >= 1) gap = std::max(gap, std::abs(jc[n]));
    if (n >= 2) gap = std::max(gap, std::abs(jr[n]));
  }
  return make_check("constant_background_jets", gap, 1e-14);
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  const GammaLaw eos{cfg.gamma};
  const std::filesystem::path dir = command_output_dir(cfg, "verify");

  const auto provider = constant_background(eos);
  const BoundaryDataTable table =
      solve_c0(provider, 2, std::exp(2.0), 1e-3);

  std::vector<Check> checks;
  checks.push_back(check_fan_roundtrip(eos));
  checks.push_back(check_table_vs_closed_forms(table, eos));
  checks.push_back(check_transport_identity(table));
  checks.push_back(check_balance_refinement(MultiplierKind::local, cfg.s));
  checks.push_back(check_balance_refinement(MultiplierKind::global_w, cfg.s));
  checks.push_back(check_power_log_derivative());
  checks.push_back(check_curve_integration(eos));
  checks.push_back(check_constant_jets(eos));

  nlohmann::ordered_json report;
  report["version"] = kVersion;
  report["command"] = "verify";
  report["config"] = cfg.to_json();
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  std::string failed;
  for (const Check& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["value"] = c.value;
    j["tol"] = c.tol;
    list.push_back(std::move(j));
    if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
  }
  report["checks"] = std::move(list);
  report["all_pass"] = failed.empty();
  write_json(dir / "verify.json", report);

  if (!failed.empty())
    throw NumericalError("self-checks failed: " + failed);
  return 0;
}

}  // namespace rarefaction
