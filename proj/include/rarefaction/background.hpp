// Exterior background traces along the boundary curve: the constant state and
// an analytic perturbation family with prescribed long-time decay. Providers
// return the trace state and its L-derivative jets; they must be genuine
// solution traces, i.e. the transport residual Lwbar + c v / r vanishes.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rarefaction/core_state.hpp"

namespace rarefaction {

class BackgroundProvider {
 public:
  virtual ~BackgroundProvider() = default;

  virtual FluidState state(double t) const = 0;
  virtual double radius(double t) const = 0;

  // Raw L-derivatives 0..order of c, v, r along the curve (index n holds the
  // n-th derivative value). order must not exceed max_jet_order().
  virtual void jets(double t, int order, std::vector<double>& c,
                    std::vector<double>& v, std::vector<double>& r) const = 0;

  virtual int max_jet_order() const = 0;
  virtual std::string kind() const = 0;
  virtual const GammaLaw& eos() const = 0;

  enum class Quantity { c, v };
  double Lderiv(Quantity q, int n, double t) const;
};

struct PerturbationSpec {
  double epsilon = 0.0;    // amplitude scale of the trace perturbation
  double delta_exp = 0.1;  // decay-loss exponent, must stay below 1/2
  std::vector<double> M;   // per-order bound constants M_n for n = 2..; may be
                           // left empty to have the factory fill measured ones

  void validate() const;
};

std::shared_ptr<const BackgroundProvider> constant_background(const GammaLaw& eos);

// Analytic family built by prescribing the ingoing invariant along the curve
// and deriving (c, v, r) consistently, so the transport residual vanishes
// identically. Amplitudes are seeded, then calibrated so the sampled decay
// bounds hold strictly. Supports t in [1, t_max].
std::shared_ptr<const BackgroundProvider> perturbed_background(
    const PerturbationSpec& spec, std::uint64_t seed, const GammaLaw& eos,
    double t_max = 1.1e3);

// The effective spec of a perturbed provider (amplitude-calibrated, with
// measured M_n filled in). Throws for providers of a different kind.
const PerturbationSpec& effective_spec(const BackgroundProvider& provider);

struct SampledCurve {
  std::vector<double> t;
  std::vector<double> r;
};

// RK4 integration of dr/dt = (v + c)(t) from the provider trace, starting at
// radius(t0). Nodes every `step` plus a final partial step to t1.
SampledCurve integrate_C0(const BackgroundProvider& provider, double t0,
                          double t1, double step);

}  // namespace rarefaction
