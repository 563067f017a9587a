// Approximate Cauchy data by boundary-curve Taylor polynomials and the
// method-of-lines march of the characteristic system in the curve-adapted
// (t, u) coordinates.
#pragma once

#include <cstddef>
#include <vector>

#include "rarefaction/boundary_data.hpp"
#include "rarefaction/core_state.hpp"

namespace rarefaction {

// Polynomial-in-u data on the starting slice t = 1 + delta. The radius
// polynomial integrates the kappa polynomial in u, so the slice value at
// u = 0 and the derivative identity kappa_N = -du r_N both hold exactly.
struct TaylorData {
  int N = 0;
  double t0 = 0.0;     // slice time, 1 + delta
  double gamma = 0.0;
  std::vector<double> u;
  std::vector<double> w, wbar, r, kappa;
  std::vector<double> Lw, Lwbar, Lr;
};

struct MarchOptions {
  double cfl_factor = 0.4;
  std::size_t max_rows = 2000;  // stored-row budget (first and last kept)
  double c_min = kVacuumCMin;
};

// Method-of-lines grid: rows are stored time slices over the common u nodes.
// kappa holds the evolved auxiliary; the geometric -du r is recomputed from
// the stencil wherever needed and the gap between the two is monitored.
struct AcousticalGrid {
  double gamma = 0.0;
  std::vector<double> u;
  std::vector<double> t;
  std::vector<std::vector<double>> w, wbar, r, kappa;

  // Step diagnostics accumulated over the whole march, not only stored rows.
  double kappa_consistency_max = 0.0;  // |evolved kappa - (-du r)| sup
  double wbar_pin_gap_max = 0.0;       // evolved-vs-pinned wbar drift at u=0
  double dt_min = 0.0, dt_max = 0.0;
  std::size_t steps = 0;
  std::vector<double> cfl_t, cfl_dt, cfl_kappa_min, cfl_c_max;

  double c_at(std::size_t i, std::size_t j) const;
  double v_at(std::size_t i, std::size_t j) const;
  // Geometric kappa from the radius stencil on a stored row.
  double kappa_geo_at(std::size_t i, std::size_t j) const;
};

// Builds the slice polynomials from the table sampled at t = 1 + delta.
// u_grid must be uniform starting at 0. Throws NumericalError if the radius
// polynomial folds (kappa_N <= 0) anywhere on the grid.
TaylorData build_taylor_data(const BoundaryDataTable& table, double delta,
                             int N, const std::vector<double>& u_grid);

// Slice data for an exactly constant state: w, wbar frozen, unit-kappa linear
// foliation r = r0 - u. Exercises the exact-preservation path.
TaylorData constant_state_data(const FluidState& state, const GammaLaw& eos,
                               double t0, double r0,
                               const std::vector<double>& u_grid);

// RK4-in-t march with upwind (toward u = 0) differences feeding the
// w-equation and the u = 0 column pinned to the table trace each stage. The
// step obeys dt <= cfl_factor * du * kappa_min / (2 c_max), re-evaluated
// every step, capped by dt_max. Throws NumericalError on characteristic
// fold (kappa <= 0) or vacuum approach.
AcousticalGrid march(const TaylorData& data, const BoundaryDataTable& table,
                     double t_end, double dt_max,
                     const MarchOptions& opts = {});

// Discrete residuals of the three transport equations on stored rows
// (interior time slices; max and root-mean-square norms).
struct ResidualReport {
  double max_wbar = 0.0, rms_wbar = 0.0;  // L wbar + c v / r
  double max_r = 0.0, rms_r = 0.0;        // L r - (v + c)
  double max_w = 0.0, rms_w = 0.0;        // Lbar w + kappa v / r
};

ResidualReport residuals(const AcousticalGrid& grid);

}  // namespace rarefaction
