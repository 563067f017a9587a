// Run configuration shared by all subcommands: ranges are validated before
// any computation, and the resolved values are echoed into run manifests.
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "rarefaction/background.hpp"
#include "rarefaction/core_state.hpp"

namespace rarefaction {

struct RunConfig {
  double gamma = 1.4;
  std::string background = "constant";  // constant | perturbed
  double epsilon = 1e-2;                // perturbation amplitude scale
  double delta_exp = 0.1;               // perturbation decay-loss exponent
  std::uint64_t seed = 1234;

  double delta = 1e-3;  // start offset past the corner
  int order = 3;        // Taylor/boundary order N
  double u_star = 0.0;  // <= 0 resolves to 0.1 (gamma+1)/(gamma-1)
  int nu = 64;          // u intervals
  double t_end = 10.0;
  double s = 0.5;       // global multiplier weight exponent
  double step = 1e-3;   // boundary table RK4 step
  double dt_max = 0.05; // march step cap

  double c1 = 1.0;      // 1-D fan: quiet-side sound speed
  double vp = 1.0;      // 1-D fan: piston speed
  int samples = 101;    // 1-D fan sample count

  std::string output_dir;  // output root override (else env, else ./out)
  std::string tag;         // output subdirectory; defaults to the subcommand

  double resolved_u_star() const;
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

std::shared_ptr<const BackgroundProvider> make_provider(const RunConfig& cfg);

}  // namespace rarefaction
