// Recursive ODE systems along the boundary curve: for each order n the pair
// (T^n wbar, T^{n-1} kappa) evolves in t while T^n w is determined
// algebraically; columns start from the degenerate corner data
//   Tw = 0, Twbar = -2/(gamma+1), kappa = 0, higher orders 0.
// All orders are integrated jointly (the system is lower triangular in the
// order index), seeded a small offset past the corner.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rarefaction/background.hpp"
#include "rarefaction/core_state.hpp"

namespace rarefaction {

// Integration seed offset past the corner: kappa ~ kDelta0 there.
inline constexpr double kDelta0 = 1e-8;

// A fixed-step integration segment: RK4 with step `step` up to time `t_end`.
struct StepSegment {
  double t_end = 0.0;
  double step = 0.0;
};

struct BoundaryRow {
  double t = 0.0;
  double w = 0.0, wbar = 0.0, r = 0.0, c = 0.0, v = 0.0;
  double Lw = 0.0, Lwbar = 0.0;
  std::vector<double> Tw, Twbar, Tkappa;     // order n at index n-1
  std::vector<double> LTw, LTwbar, LTkappa;  // L-derivatives of the above
};

class BoundaryDataTable {
 public:
  int order = 0;
  double gamma = 0.0;
  std::vector<StepSegment> segments;
  std::vector<double> t;
  std::vector<double> w, wbar, r, c, v, Lw, Lwbar;
  // Column families indexed [n-1] for order n = 1..order. Tkappa[n-1] holds
  // T^{n-1} kappa, so Tkappa[0] is kappa itself.
  std::vector<std::vector<double>> Tw, Twbar, Tkappa;
  std::vector<std::vector<double>> LTw, LTwbar, LTkappa;
  std::shared_ptr<const BackgroundProvider> provider;

  const std::vector<double>& kappa() const { return Tkappa[0]; }

  // 4-point Lagrange interpolation across stored rows.
  BoundaryRow sample(double at) const;
  double sample_kappa(double at) const;
};

// Joint RK4 solve of orders 1..N over piecewise-fixed-step segments starting
// at the corner (seeded at 1 + kDelta0). Rows are stored at step nodes.
BoundaryDataTable solve_c0(std::shared_ptr<const BackgroundProvider> provider,
                           int N, const std::vector<StepSegment>& segments);

BoundaryDataTable solve_c0(std::shared_ptr<const BackgroundProvider> provider,
                           int N, double t_end, double step);

// Near-corner table on geometric decades of local time t-1 in
// [t_loc_lo, t_loc_hi], fixed RK4 step count per decade. Used for
// vanishing-order fits.
BoundaryDataTable solve_c0_geometric(
    std::shared_ptr<const BackgroundProvider> provider, int N, double t_loc_lo,
    double t_loc_hi, int steps_per_decade);

// First-order columns over [t_span0, t_span1]; t_span0 must be the corner
// time 1 (integration always starts there).
BoundaryDataTable solve_order1(std::shared_ptr<const BackgroundProvider> provider,
                               double t_span0, double t_span1, double step);

// Extends a table through order n-1 by the order-n columns, re-deriving the
// shared lower columns on the same grid and requiring them to agree.
BoundaryDataTable solve_orderN(std::shared_ptr<const BackgroundProvider> provider,
                               const BoundaryDataTable& lower, double step);

struct SingularSeries {
  std::vector<double> g;  // LT^n w at the corner, n = 0..N
  std::vector<double> a;  // a(n) = |c0^n lambda^{-n} g(n) / n!|
  double lambda = 0.0;    // (gamma-1)/(gamma+1)
  double c0 = 0.0;

  // Smallest C with |g(n)| <= C lambda^n n! / c0^n for all n, i.e. max a(n).
  double bound_constant() const;
};

// Exact evaluation of the corner recursion for the L-derivatives of the
// outgoing invariant; the ingoing ones vanish at the corner at every order.
SingularSeries singular_series(double g0, const GammaLaw& eos, double c0, int N);

struct VanishingFit {
  std::string column;
  int target = 0;       // expected power of local time
  bool exact_zero = false;
  double exponent = 0.0;
  double prefactor = 0.0;
};

// Log-log least squares of each column against local time t-1 over rows with
// t-1 in [fit_lo, fit_hi]. Identically vanishing columns are reported as
// exact zeros rather than exponents.
std::vector<VanishingFit> vanishing_orders(const BoundaryDataTable& table,
                                           double fit_lo = 1e-5,
                                           double fit_hi = 1e-3);

// Derivative-cell evaluator used by the solver; exposed for direct testing.
// Cell (i, m) of a quantity holds L^m T^i of it at one curve point, built
// from the ODE state by two-dimensional Leibniz expansion. The construction
// divides only by c and r: no kappa reciprocal exists anywhere.
class C0CellEvaluator {
 public:
  C0CellEvaluator(const GammaLaw& eos, int N);

  // state layout: Twbar[n] at [n-1], Tkappa[n-1] at [N + n - 1], n = 1..N.
  void evaluate(const BackgroundProvider& provider, double t,
                const std::vector<double>& state);

  int order() const { return N_; }
  double w(int i, int m) const { return cell(w_, i, m); }
  double wbar(int i, int m) const { return cell(wbar_, i, m); }
  double kappa(int i, int m) const { return cell(kappa_, i, m); }
  double r(int i, int m) const { return cell(r_, i, m); }
  double c(int i, int m) const { return cell(c_, i, m); }
  double v(int i, int m) const { return cell(v_, i, m); }

 private:
  double cell(const std::vector<double>& g, int i, int m) const;
  double& cell(std::vector<double>& g, int i, int m);
  double conv(const std::vector<double>& f, const std::vector<double>& g, int i,
              int m) const;

  GammaLaw eos_;
  int N_;
  int dim_;  // grid edge: cells (i, m) with 0 <= i, m <= dim_-1
  std::vector<std::vector<double>> binom_;
  std::vector<double> w_, wbar_, kappa_, r_, c_, v_;
  std::vector<double> sq_, rec_r_, rec_c_, p_;
  std::vector<double> jc_, jv_, jr_;  // provider jet scratch
};

}  // namespace rarefaction
