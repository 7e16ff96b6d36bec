#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "burgers/minimizer.hpp"
#include "burgers/oracle.hpp"

using namespace burgers;

namespace {
RegenerationPoint origin_anchor(double y = 0.0) { return RegenerationPoint{0.0, y, 0.5}; }
}  // namespace

TEST_CASE("dynamic program matches enumeration on random small fields") {
  Rng rng(77);
  for (int i = 0; i < 40; ++i) {
    double L = rng.uniform(0.8, 2.0);
    ForcingField field(std::vector<ForcingPoint>{}, 0.0, 1.0);
    while (true) {
      field = ForcingField::sample_compound_poisson(3.0 / L, ConstantWeight{1.0}, 0.0, L,
                                                    rng.next_u64());
      if (field.points().size() <= 6) break;
    }
    RegenerationPoint anchor{0.0, rng.uniform01(), 0.25};
    double theta = rng.uniform(-2.5, 2.5);
    double x = rng.uniform01();
    MinimizerEngine engine(field, theta, anchor);
    auto ms = engine.minimizers_at(L, x);
    auto oracle = enumerate_minimizers(field, theta, anchor.T_star, anchor.y_star, L, x);
    REQUIRE(ms.action ==
            Catch::Approx(oracle.action).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("two tied lifts give extreme slopes at the seam") {
  // anchor (0,0), theta 1, t 0.5, query x = 0: slopes 2 and 0 tie
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  MinimizerEngine engine(field, 1.0, origin_anchor());
  auto ms = engine.minimizers_at(0.5, 0.0);
  REQUIRE(ms.paths.size() == 2);
  REQUIRE(ms.u_left() == Catch::Approx(2.0));
  REQUIRE(ms.u_right() == Catch::Approx(0.0));
  REQUIRE(ms.winding_of(ms.leftmost) - ms.winding_of(ms.rightmost) == Catch::Approx(1.0));

  auto classes = winding_class_extremes(ms);
  REQUIRE(classes.size() == 2);
  REQUIRE(classes.front().winding > classes.back().winding);
}

TEST_CASE("order comparison distinguishes left of and right of") {
  LiftedPath a{{{0.0, -1.0}, {0.5, 0.0}}};  // slope 2, endpoint 0
  LiftedPath b{{{0.0, 0.0}, {0.5, 0.0}}};   // slope 0, endpoint 0
  REQUIRE(order_compare(a, b) == -1);
  REQUIRE(order_compare(b, a) == 1);
  REQUIRE(order_compare(a, a) == 0);
}

TEST_CASE("anchor-only profile has one global breakpoint and exact mean") {
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  MinimizerEngine engine(field, 0.0, origin_anchor());
  Profile prof = engine.profile(1.0);
  REQUIRE(prof.breakpoints.size() == 1);
  REQUIRE(prof.breakpoints[0] == Catch::Approx(0.5));
  REQUIRE(prof.velocity(0.25) == Catch::Approx(0.25));
  REQUIRE(prof.velocity(0.75) == Catch::Approx(-0.25));
  auto [ul, ur] = prof.jump_at(prof.breakpoints[0]);
  REQUIRE(ul == Catch::Approx(0.5));
  REQUIRE(ur == Catch::Approx(-0.5));
  REQUIRE(prof.mean() == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(prof.integral(0.5) == Catch::Approx(0.125));
}

TEST_CASE("profile mean equals theta on forced fields") {
  auto field = ForcingField::sample_compound_poisson(1.5, ConstantWeight{1.0}, -8.0, 4.0, 11);
  auto anchor = field.regeneration_point(2.0, 0.5);
  for (double theta : {-1.2, -0.3, 0.0, 0.7, 1.4}) {
    MinimizerEngine engine(field, theta, anchor);
    REQUIRE(engine.profile(2.0).mean() == Catch::Approx(theta).margin(1e-10));
  }
}

TEST_CASE("profile velocity field integrates the envelope consistently") {
  auto field = ForcingField::sample_compound_poisson(1.5, ConstantWeight{1.0}, -8.0, 4.0, 12);
  auto anchor = field.regeneration_point(1.5, 0.5);
  MinimizerEngine engine(field, 0.4, anchor);
  Profile prof = engine.profile(1.5);
  // u agrees with the slope of the winning minimizer at sampled points
  for (double x : {0.05, 0.31, 0.57, 0.83}) {
    auto ms = engine.minimizers_at(1.5, x);
    REQUIRE(prof.velocity(x) ==
            Catch::Approx(ms.paths[ms.rightmost].slope_before(1.5)).margin(1e-9));
  }
}

TEST_CASE("minimizer sets respect the anchor time") {
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  MinimizerEngine engine(field, 0.0, origin_anchor());
  REQUIRE_THROWS_AS(engine.minimizers_at(0.0, 0.5), Error);
  REQUIRE_THROWS_AS(engine.profile(-0.5), Error);
}
