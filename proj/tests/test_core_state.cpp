// State algebra: invariant maps, characteristic speeds, coordinate charts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rarefaction/core_state.hpp"
#include "rarefaction/errors.hpp"

using namespace rarefaction;

TEST_CASE("gamma-law accessors and validation") {
  const GammaLaw eos(1.4);
  CHECK(eos.gamma() == doctest::Approx(1.4));
  CHECK(eos.gm1() == doctest::Approx(0.4));
  CHECK(eos.gp1() == doctest::Approx(2.4));

  CHECK_THROWS_AS(GammaLaw(1.0), ConfigError);
  CHECK_THROWS_AS(GammaLaw(0.9), ConfigError);
  CHECK_THROWS_AS(GammaLaw(std::nan("")), ConfigError);
}

TEST_CASE("invariants of a reference state") {
  const GammaLaw eos(1.4);
  const InvariantPair inv = to_invariants({1.0, 0.5}, eos);
  // c/(gamma-1) = 2.5, so w = 2.5 - 0.25 and wbar = 2.5 + 0.25.
  CHECK(inv.w == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(inv.wbar == doctest::Approx(2.75).epsilon(1e-14));

  const FluidState back = from_invariants(inv, eos);
  CHECK(back.c == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(back.v == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("invariant round trip over random states") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> cs(0.05, 4.0);
  std::uniform_real_distribution<double> vs(-3.0, 3.0);
  std::uniform_real_distribution<double> gs(1.05, 3.0);
  for (int i = 0; i < 200; ++i) {
    const GammaLaw eos(gs(rng));
    const FluidState st{cs(rng), vs(rng)};
    const FluidState back = from_invariants(to_invariants(st, eos), eos);
    CHECK(back.c == doctest::Approx(st.c).epsilon(1e-13));
    CHECK(back.v == doctest::Approx(st.v).epsilon(1e-13));

    const InvariantPair inv{cs(rng), cs(rng)};  // positive sum: valid
    const InvariantPair again = to_invariants(from_invariants(inv, eos), eos);
    CHECK(again.w == doctest::Approx(inv.w).epsilon(1e-13));
    CHECK(again.wbar == doctest::Approx(inv.wbar).epsilon(1e-13));
  }
}

TEST_CASE("vacuum guards reject degenerate states") {
  const GammaLaw eos(1.4);
  CHECK_THROWS_AS(to_invariants({0.0, 1.0}, eos), NumericalError);
  CHECK_THROWS_AS(to_invariants({1e-13, 0.0}, eos), NumericalError);
  CHECK_THROWS_AS(from_invariants({1.0, -1.0}, eos), NumericalError);
  CHECK_THROWS_AS(from_invariants({-2.0, 1.0}, eos), NumericalError);
  CHECK_THROWS_AS(characteristic_speeds({0.0, 1.0}), NumericalError);
}

TEST_CASE("characteristic speeds are v +- c") {
  const auto sp = characteristic_speeds({1.25, -0.5});
  CHECK(sp[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(sp[1] == doctest::Approx(-1.75).epsilon(1e-15));
}

TEST_CASE("normalized chart maps the corner to t = 1") {
  const CoordTriple corner = normalize_coordinates({0.0, 0.0, 0.0}, 2.5, 0.7);
  CHECK(corner.t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(corner.x == doctest::Approx(0.0));
  CHECK(corner.u == doctest::Approx(0.0));

  // Scaling: one reference-radius transit time maps to unit chart time.
  const CoordTriple p = normalize_coordinates({2.5 / 0.7, 2.5, 0.7}, 2.5, 0.7);
  CHECK(p.t == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.u == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chart maps invert each other") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ts(-3.0, 50.0);
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double r0 = scale(rng), c0 = scale(rng);
    const CoordTriple p{ts(rng), xs(rng), xs(rng)};
    const CoordTriple back =
        denormalize_coordinates(normalize_coordinates(p, r0, c0), r0, c0);
    CHECK(back.t == doctest::Approx(p.t).epsilon(1e-12));
    CHECK(back.x == doctest::Approx(p.x).epsilon(1e-12));
    CHECK(back.u == doctest::Approx(p.u).epsilon(1e-12));
  }
}

TEST_CASE("chart maps validate the reference scales") {
  CHECK_THROWS_AS(normalize_coordinates({1.0, 1.0, 1.0}, 0.0, 1.0),
                  ConfigError);
  CHECK_THROWS_AS(normalize_coordinates({1.0, 1.0, 1.0}, 1.0, -2.0),
                  ConfigError);
  CHECK_THROWS_AS(denormalize_coordinates({1.0, 1.0, 1.0}, -1.0, 1.0),
                  ConfigError);
}
