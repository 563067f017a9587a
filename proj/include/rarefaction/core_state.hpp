// Gamma-law state algebra: Riemann invariants, characteristic speeds, and the
// normalized coordinate chart used internally by every other component.
//
// Internal convention: all solvers work in the normalized chart with unit
// reference radius and sound speed, where the corner of the wave sits at
// t = 1 and the boundary curve has r(1) = 1. normalize_coordinates maps raw
// (t, x, u) into this chart; callers must state which chart they are in.
#pragma once

#include <array>

#include "rarefaction/errors.hpp"

namespace rarefaction {

// Sound speeds below this threshold are treated as vacuum and rejected.
inline constexpr double kVacuumCMin = 1e-12;

class GammaLaw {
 public:
  explicit GammaLaw(double gamma);

  double gamma() const { return gamma_; }
  double gm1() const { return gamma_ - 1.0; }  // gamma - 1
  double gp1() const { return gamma_ + 1.0; }  // gamma + 1

 private:
  double gamma_;
};

struct FluidState {
  double c = 0.0;  // sound speed, > 0 away from vacuum
  double v = 0.0;  // radial velocity, positive = outgoing
};

struct InvariantPair {
  double w = 0.0;     // outgoing-family invariant
  double wbar = 0.0;  // ingoing-family invariant
};

struct FramePoint {
  double t = 0.0;
  double u = 0.0;
  double r = 0.0;
  double kappa = 0.0;  // -d_u r; zero only at the singular instant
};

// w = c/(gamma-1) - v/2, wbar = c/(gamma-1) + v/2. Rejects c below vacuum.
InvariantPair to_invariants(const FluidState& state, const GammaLaw& eos);

// c = (gamma-1)(wbar+w)/2, v = wbar - w. Rejects wbar + w <= 0.
FluidState from_invariants(const InvariantPair& pair, const GammaLaw& eos);

// {outgoing, ingoing} = {v + c, v - c}.
std::array<double, 2> characteristic_speeds(const FluidState& state);

struct CoordTriple {
  double t = 0.0;
  double x = 0.0;
  double u = 0.0;
};

// (t', x', u') = (c0 t / r0 + 1, x / r0, u / c0). The wave corner maps to
// t' = 1 in the normalized chart.
CoordTriple normalize_coordinates(const CoordTriple& p, double r0, double c0);

// Inverse of normalize_coordinates.
CoordTriple denormalize_coordinates(const CoordTriple& p, double r0, double c0);

}  // namespace rarefaction
