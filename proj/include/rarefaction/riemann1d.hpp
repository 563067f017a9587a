// Closed-form 1-D piston withdrawal fan. Serves as the limiting oracle for
// the spherical solution near the corner and as a baseline CSV generator.
//
// The fan is parameterized by the similarity variable xi = x/t. Inside the
// fan the state is linear in xi:
//   v = 2/(gamma+1) (xi - c1),  c = (gamma-1)/(gamma+1) (xi - c1) + c1,
// with the quiet region (c1, 0) to the right of xi = c1 and the uniformly
// moving piston region to the left of the head.
#pragma once

#include "rarefaction/core_state.hpp"

namespace rarefaction {

struct PistonProblem {
  // Validates c1 > 0, vp >= 0 and records whether the fan reaches vacuum
  // (vp >= 2 c1 / (gamma-1)).
  PistonProblem(double c1, double vp, const GammaLaw& eos);

  double c1;
  double vp;
  GammaLaw eos;
  bool reaches_vacuum;
};

// Thrown for xi outside the fan; names the constant region that applies there.
struct OutsideFan : NumericalError {
  enum class Region { piston_side, quiet_side };
  OutsideFan(Region region, const FluidState& state, const std::string& msg)
      : NumericalError(msg), region(region), state(state) {}
  Region region;
  FluidState state;  // the constant state valid at the queried xi
};

// {head, tail} = {c1 - (gamma+1) vp / 2, c1}; the fan occupies [head, tail].
std::array<double, 2> fan_edges(const PistonProblem& prob);

FluidState fan_state(double xi, const PistonProblem& prob);

// w = c1/(gamma-1) across the fan; wbar = 2/(gamma+1)(xi - c1) + c1/(gamma-1).
InvariantPair fan_invariants(double xi, const PistonProblem& prob);

}  // namespace rarefaction
