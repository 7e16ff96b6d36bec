#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "burgers/oracle.hpp"

using namespace burgers;

TEST_CASE("oracle on an empty field minimizes over lifts only") {
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  double theta = 0.7, y = 0.2, x = 0.9, t = 1.0;
  auto res = enumerate_minimizers(field, theta, 0.0, y, t, x);
  double best = 1e300;
  for (int k = -4; k <= 4; ++k) {
    double delta = (x - y) + k;
    best = std::min(best, 0.5 * (delta - theta) * (delta - theta));
  }
  REQUIRE(res.action == Catch::Approx(best).epsilon(1e-14));
  REQUIRE(res.paths.size() == 1);
  REQUIRE(res.paths[0].anchors.size() == 2);
}

TEST_CASE("oracle lift tie keeps both paths") {
  // from (0,0) to (1, 0.5) at theta 0: lifts 0.5 and -0.5 tie at cost 1/8
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  auto res = enumerate_minimizers(field, 0.0, 0.0, 0.0, 1.0, 0.5);
  REQUIRE(res.action == Catch::Approx(0.125).epsilon(1e-14));
  REQUIRE(res.paths.size() == 2);
  double s0 = res.paths[0].slope_before(1.0);
  double s1 = res.paths[1].slope_before(1.0);
  REQUIRE(std::fabs(s0 - s1) == Catch::Approx(1.0));
}

TEST_CASE("oracle collects a worthwhile atom") {
  // straight-through cost 0; detour to the atom costs kinetic but gains weight
  ForcingField field({{0.5, 0.25, 2.0}}, -1.0, 2.0);
  auto res = enumerate_minimizers(field, 0.0, 0.0, 0.0, 1.0, 0.0);
  // detour (0,0)->(0.5,0.25)->(1,0): kinetic 2 * 0.5*0.5*(0.5)^2 = 0.125, weight -2
  REQUIRE(res.action == Catch::Approx(-1.875).epsilon(1e-14));
  REQUIRE(res.paths.size() == 1);
  REQUIRE(res.paths[0].anchors.size() == 3);
  REQUIRE(res.paths[0].anchors[1].time == Catch::Approx(0.5));
}

TEST_CASE("oracle skips a worthless atom") {
  ForcingField field({{0.5, 0.25, 0.01}}, -1.0, 2.0);
  auto res = enumerate_minimizers(field, 0.0, 0.0, 0.0, 1.0, 0.0);
  REQUIRE(res.action == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(res.paths[0].anchors.size() == 2);
}

TEST_CASE("oracle collects the starting atom for free") {
  ForcingField field({{0.0, 0.3, 1.5}}, -1.0, 2.0);
  auto res = enumerate_minimizers(field, 0.0, 0.0, 0.3, 1.0, 0.3);
  REQUIRE(res.action == Catch::Approx(-1.5).margin(1e-14));
}

TEST_CASE("oracle refuses oversized fields") {
  std::vector<ForcingPoint> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({0.1 * (i + 1), 0.1 * i, 1.0});
  ForcingField field(std::move(pts), 0.0, 2.0);
  REQUIRE_THROWS_AS(enumerate_minimizers(field, 0.0, 0.0, 0.0, 1.5, 0.0), TooLarge);
}
