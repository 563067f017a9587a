// Deterministic uniform random numbers. std::mt19937_64 is seeded explicitly
// and mapped to doubles by hand; std::uniform_real_distribution is avoided
// because its algorithm is not pinned across standard library versions.
#pragma once

#include <cstdint>
#include <random>

namespace rarefaction {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rarefaction
