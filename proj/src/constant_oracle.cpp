#include "rarefaction/constant_oracle.hpp"

#include <cmath>

namespace rarefaction {

double DecayTerm::envelope(double t) const {
  if (!(t >= 1.0)) {
    throw NumericalError("DecayTerm::envelope: t must be >= 1");
  }
  return std::pow(t, -a) * std::pow(std::log(t), b);
}

double closed_form(const std::string& quantity, double t, const GammaLaw& eos) {
  if (!(t >= 1.0)) {
    throw NumericalError("closed_form: t must be >= 1 in the normalized chart");
  }
  const double g = eos.gamma();
  const double gp1 = eos.gp1();
  const double lnt = std::log(t);
  if (quantity == "Tw") {
    return 0.0;
  }
  if (quantity == "Twbar") {
    return -2.0 / (gp1 * t);
  }
  if (quantity == "kappa") {
    return lnt;
  }
  if (quantity == "T2w") {
    return lnt / (gp1 * t * t);
  }
  if (quantity == "T2wbar") {
    const double k = (g + 9.0) / (gp1 * gp1);
    return k / t - k / (t * t) - 5.0 / gp1 * lnt / (t * t);
  }
  if (quantity == "Tkappa") {
    return -(g + 9.0) / (2.0 * gp1) * lnt +
           (5.0 * g + 17.0) / (2.0 * gp1) * (1.0 - 1.0 / t) -
           (2.0 * g + 4.0) / gp1 * lnt / t;
  }
  throw ConfigError("closed_form: unknown quantity '" + quantity + "'");
}

double integrate_power_log(int a, int b, double t) {
  if (a < 1) {
    throw ConfigError("integrate_power_log: power exponent a must be >= 1");
  }
  if (b < 0) {
    throw ConfigError("integrate_power_log: log exponent b must be >= 0");
  }
  if (!(t >= 1.0)) {
    throw NumericalError("integrate_power_log: t must be >= 1");
  }
  const double lnt = std::log(t);
  if (a == 1) {
    return std::pow(lnt, b + 1) / (b + 1);
  }
  // Repeated integration by parts terminates in b+1 boundary terms plus the
  // constant contribution from the lower limit.
  const double am1 = a - 1.0;
  double factorial_ratio = 1.0;  // b! / (b-i)!
  double sum = 0.0;
  for (int i = 0; i <= b; ++i) {
    if (i > 0) factorial_ratio *= b - i + 1;
    sum += factorial_ratio * std::pow(am1, -(i + 1.0)) * std::pow(lnt, b - i);
  }
  // factorial_ratio ends at b!: the lower-limit contribution keeps it.
  return -sum * std::pow(t, -am1) + factorial_ratio * std::pow(am1, -(b + 1.0));
}

DecayTerm decay_type_of(int n, DecayFamily family) {
  if (n < 1) {
    throw ConfigError("decay_type_of: order must be >= 1");
  }
  switch (family) {
    case DecayFamily::w:
      return {0, -(n - 1), 2, 1, 1.0};
    case DecayFamily::wbar:
      return {0, -(n - 1), 1, 0, 1.0};
    case DecayFamily::kappa:
      return {1, -n, 0, 1, 1.0};
  }
  throw ConfigError("decay_type_of: unknown family");
}

}  // namespace rarefaction
