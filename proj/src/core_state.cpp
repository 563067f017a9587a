#include "rarefaction/core_state.hpp"

namespace rarefaction {

GammaLaw::GammaLaw(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0)) {
    throw ConfigError("gamma must be a finite value > 1");
  }
}

InvariantPair to_invariants(const FluidState& state, const GammaLaw& eos) {
  if (!(state.c >= kVacuumCMin)) {
    throw NumericalError("to_invariants: sound speed at or below vacuum guard");
  }
  const double base = state.c / eos.gm1();
  return {base - 0.5 * state.v, base + 0.5 * state.v};
}

FluidState from_invariants(const InvariantPair& pair, const GammaLaw& eos) {
  const double sum = pair.wbar + pair.w;
  const double c = 0.5 * eos.gm1() * sum;
  if (!(c >= kVacuumCMin)) {
    throw NumericalError("from_invariants: wbar + w gives vacuum sound speed");
  }
  return {c, pair.wbar - pair.w};
}

std::array<double, 2> characteristic_speeds(const FluidState& state) {
  if (!(state.c >= kVacuumCMin)) {
    throw NumericalError("characteristic_speeds: vacuum sound speed");
  }
  return {state.v + state.c, state.v - state.c};
}

CoordTriple normalize_coordinates(const CoordTriple& p, double r0, double c0) {
  if (!(r0 > 0.0) || !(c0 > 0.0)) {
    throw ConfigError("normalize_coordinates: r0 and c0 must be positive");
  }
  return {c0 * p.t / r0 + 1.0, p.x / r0, p.u / c0};
}

CoordTriple denormalize_coordinates(const CoordTriple& p, double r0, double c0) {
  if (!(r0 > 0.0) || !(c0 > 0.0)) {
    throw ConfigError("denormalize_coordinates: r0 and c0 must be positive");
  }
  return {(p.t - 1.0) * r0 / c0, p.x * r0, p.u * c0};
}

}  // namespace rarefaction
