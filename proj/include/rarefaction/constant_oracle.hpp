// Closed-form reference values for the constant-state boundary curve in the
// normalized chart (r = t, t >= 1): explicit first and second order formulas,
// the power-log integral, and the (a, b) decay-type calculus.
#pragma once

#include <string>

#include "rarefaction/core_state.hpp"

namespace rarefaction {

// One term of size ~ coeff * t^{-a} ln^b t carrying dimension bookkeeping
// exponents (p, q) for the reference radius and sound speed prefactors.
struct DecayTerm {
  int p = 0;      // reference-radius exponent
  int q = 0;      // reference-sound-speed exponent
  int a = 0;      // inverse power of t
  int b = 0;      // power of ln t
  double coeff = 1.0;

  DecayTerm operator*(const DecayTerm& o) const {
    return {p + o.p, q + o.q, a + o.a, b + o.b, coeff * o.coeff};
  }

  // (a', b') is subordinate to (a, b) iff a' > a, or a' = a and b' <= b.
  bool subordinate_to(const DecayTerm& o) const {
    return a > o.a || (a == o.a && b <= o.b);
  }

  // Envelope magnitude t^{-a} ln^b t (dimensionless chart).
  double envelope(double t) const;
};

// quantity is one of: "Tw", "Twbar", "kappa", "T2w", "T2wbar", "Tkappa".
// Exact evaluation of the printed constant-state formulas with r = t.
double closed_form(const std::string& quantity, double t, const GammaLaw& eos);

// Integral of tau^{-a} ln^b(tau) over [1, t] in closed form; a >= 1, b >= 0.
double integrate_power_log(int a, int b, double t);

// Claimed decay envelope for the n-th order column of the given family:
//   w-family (T^n w)         -> a = 2, b = 1, one c0-power lost per order
//   wbar-family (T^n wbar)   -> a = 1, b = 0
//   kappa-family (T^{n-1} kappa) -> a = 0, b = 1
enum class DecayFamily { w, wbar, kappa };
DecayTerm decay_type_of(int n, DecayFamily family);

}  // namespace rarefaction
