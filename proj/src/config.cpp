#include "rarefaction/config.hpp"

#include <algorithm>

#include "rarefaction/errors.hpp"

namespace rarefaction {

double RunConfig::resolved_u_star() const {
  if (u_star > 0.0) return u_star;
  return 0.1 * (gamma + 1.0) / (gamma - 1.0);
}

void RunConfig::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (background != "constant" && background != "perturbed")
    throw ConfigError("background must be 'constant' or 'perturbed'");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (!(delta_exp > 0.0) || !(delta_exp < 0.5))
    throw ConfigError("delta_exp must lie in (0, 1/2)");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (delta > 0.1) throw ConfigError("delta must not exceed 0.1");
  if (order < 1 || order > 6) throw ConfigError("order must lie in [1, 6]");
  const double vac = (gamma + 1.0) / (gamma - 1.0);  // unit corner sound speed
  const double us = resolved_u_star();
  if (!(us > 0.0) || !(us < vac))
    throw ConfigError("u_star must lie in (0, (gamma+1)/(gamma-1))");
  if (nu < 8 || nu > 4096) throw ConfigError("nu must lie in [8, 4096]");
  if (!(t_end > 1.0 + delta)) throw ConfigError("t_end must exceed 1 + delta");
  if (t_end > 1.05e3) throw ConfigError("t_end must not exceed 1050");
  if (!(s > 0.0) || !(s < 1.0)) throw ConfigError("s must lie in (0, 1)");
  if (!(step > 0.0) || step > 0.1)
    throw ConfigError("step must lie in (0, 0.1]");
  if (!(dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if (!(c1 > 0.0)) throw ConfigError("c1 must be positive");
  if (!(vp >= 0.0)) throw ConfigError("vp must be nonnegative");
  if (samples < 2 || samples > 100000)
    throw ConfigError("samples must lie in [2, 100000]");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["gamma"] = gamma;
  j["background"] = background;
  j["epsilon"] = epsilon;
  j["delta_exp"] = delta_exp;
  j["seed"] = seed;
  j["delta"] = delta;
  j["order"] = order;
  j["u_star"] = resolved_u_star();
  j["nu"] = nu;
  j["t_end"] = t_end;
  j["s"] = s;
  j["step"] = step;
  j["dt_max"] = dt_max;
  j["c1"] = c1;
  j["vp"] = vp;
  j["samples"] = samples;
  return j;
}

std::shared_ptr<const BackgroundProvider> make_provider(const RunConfig& cfg) {
  const GammaLaw eos(cfg.gamma);
  if (cfg.background == "constant") return constant_background(eos);
  PerturbationSpec spec;
  spec.epsilon = cfg.epsilon;
  spec.delta_exp = cfg.delta_exp;
  const double t_max = std::max(1.1e3, cfg.t_end * 1.05);
  return perturbed_background(spec, cfg.seed, eos, t_max);
}

}  // namespace rarefaction
