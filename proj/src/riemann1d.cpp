#include "rarefaction/riemann1d.hpp"

namespace rarefaction {

PistonProblem::PistonProblem(double c1_in, double vp_in, const GammaLaw& eos_in)
    : c1(c1_in), vp(vp_in), eos(eos_in) {
  if (!(c1 > 0.0)) {
    throw ConfigError("PistonProblem: undisturbed sound speed must be positive");
  }
  if (!(vp >= 0.0)) {
    throw ConfigError("PistonProblem: piston withdrawal speed must be >= 0");
  }
  reaches_vacuum = vp >= 2.0 * c1 / eos.gm1();
}

std::array<double, 2> fan_edges(const PistonProblem& prob) {
  return {prob.c1 - 0.5 * prob.eos.gp1() * prob.vp, prob.c1};
}

FluidState fan_state(double xi, const PistonProblem& prob) {
  const auto [head, tail] = fan_edges(prob);
  if (xi < head) {
    const FluidState piston{prob.c1 - 0.5 * prob.eos.gm1() * prob.vp, -prob.vp};
    throw OutsideFan(OutsideFan::Region::piston_side, piston,
                     "xi below the fan head: constant piston region applies");
  }
  if (xi > tail) {
    const FluidState quiet{prob.c1, 0.0};
    throw OutsideFan(OutsideFan::Region::quiet_side, quiet,
                     "xi above the fan tail: constant quiet region applies");
  }
  const double s = xi - prob.c1;
  return {prob.eos.gm1() / prob.eos.gp1() * s + prob.c1,
          2.0 / prob.eos.gp1() * s};
}

InvariantPair fan_invariants(double xi, const PistonProblem& prob) {
  const auto [head, tail] = fan_edges(prob);
  if (xi < head || xi > tail) {
    fan_state(xi, prob);  // throws with the proper region report
  }
  const double w = prob.c1 / prob.eos.gm1();
  return {w, 2.0 / prob.eos.gp1() * (xi - prob.c1) + w};
}

}  // namespace rarefaction
