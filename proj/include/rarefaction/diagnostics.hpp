// Discrete energy and flux functionals with the local and global weighted
// multipliers, growth-rate fits, start-offset convergence, and the
// manufactured-field balance identity.
#pragma once

#include <functional>
#include <vector>

#include "rarefaction/evolution.hpp"

namespace rarefaction {

enum class MultiplierKind { local, global_w, global_wbar };
enum class PsiField { w, wbar };

const char* to_string(MultiplierKind kind);
const char* to_string(PsiField field);

// Weight pair (a, b) of the multiplier a L + b Lbar: local and global_wbar
// use a = kappa/c, b = 1; global_w uses a = t^{1+s} c/kappa, b = 1.
struct EnergyReport {
  MultiplierKind kind = MultiplierKind::local;
  PsiField field = PsiField::w;
  int n = 0;     // T-applications of the field
  double s = 0.5;
  std::vector<double> t, E;
  std::vector<double> u, F;
  bool fit_valid = false;
  double fit_exponent = 0.0;  // log-log fit of E(t) over the last decade
  double fit_constant = 0.0;
  double sup_E = 0.0, sup_F = 0.0, sup_E_over_t2 = 0.0;
};

// Energy E(t) = int 1/2 (b |Lbar psi|^2 + a (kappa/c) |L psi|^2) 4 pi r^2 du
// per stored row and flux F(u) = int a |L psi|^2 4 pi r^2 dt per u node,
// with psi = T^n(field) from iterated second-order stencils; n <= 3.
EnergyReport energy(const AcousticalGrid& grid, PsiField field, int n,
                    MultiplierKind kind, double s = 0.5);

// F at one u level from the same construction.
double flux(const AcousticalGrid& grid, PsiField field, int n,
            MultiplierKind kind, double u_level, double s = 0.5);

struct KappaGrowthReport {
  std::vector<double> u;
  std::vector<double> alpha, beta;  // kappa ~ alpha ln t + beta per u node
  double t_lo = 0.0, t_hi = 0.0;    // fit window (last decade)
};

// Least-squares kappa-vs-ln t fit over the last decade of rows; requires the
// run to reach t >= 100.
KappaGrowthReport kappa_growth(const AcousticalGrid& grid);

struct DeltaConvergence {
  std::vector<double> start_offset;  // per run, t0 - 1
  std::vector<double> diff;          // sup-norm difference of consecutive runs
  std::vector<double> ratio;         // diff[k+1] / diff[k]
  double fitted_order = 0.0;         // mean log2 decay of diff
};

// Compares each successive pair of halved-offset runs on the pair's common
// window [start of the earlier-started... i.e. the larger offset, t_hi] x the
// shared u grid, interpolating rows in t. Anchoring each pair at the larger
// offset's own start keeps the slice-truncation signal above the level where
// initial differences have already advected out of the domain.
DeltaConvergence delta_convergence(const std::vector<AcousticalGrid>& runs,
                                   double t_hi, int nt_samples = 33);

// Keeps every factor-th stored row (plus the last); used to test that fitted
// exponents survive time-grid decimation.
AcousticalGrid decimate_rows(const AcousticalGrid& grid, int factor);

// Analytic point data for the balance identity: a smooth radius/sound-speed/
// test-function triple with exact partial derivatives. The velocity is
// defined as v = dt r - c so the outgoing-cone relation holds identically.
struct ManufacturedPoint {
  double r = 0.0, r_t = 0.0, r_u = 0.0, r_tu = 0.0, r_uu = 0.0;
  double c = 0.0, c_t = 0.0, c_u = 0.0;
  double psi = 0.0, psi_t = 0.0, psi_u = 0.0, psi_tt = 0.0, psi_tu = 0.0;
};
using ManufacturedField = std::function<ManufacturedPoint(double, double)>;

ManufacturedField standard_manufactured_field();

struct BalanceResult {
  double boundary = 0.0;  // E(t2) - E(t1) + F(u2) - F(u1)
  double bulk = 0.0;      // integral of the multiplier bulk terms
  double defect = 0.0;    // boundary - bulk, O(h^2) for smooth fields
};

// Evaluates both sides of the multiplier identity on [t1,t2] x [u1,u2] with
// nt x nu trapezoid panels; all integrands use exact derivatives, so the
// defect isolates sign or term errors in the bulk decomposition.
BalanceResult balance_defect(const ManufacturedField& field,
                             MultiplierKind kind, double s, double t1,
                             double t2, double u1, double u2, int nt, int nu);

}  // namespace rarefaction
