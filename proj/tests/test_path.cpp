#include <catch2/catch_amalgamated.hpp>

#include "burgers/forcing.hpp"
#include "burgers/path.hpp"

using namespace burgers;

namespace {
ForcingField empty_field() { return ForcingField(std::vector<ForcingPoint>{}, -10.0, 10.0); }
}  // namespace

TEST_CASE("kinetic action of a straight segment") {
  LiftedPath p{{{0.0, 0.0}, {1.0, 0.3}}};
  auto field = empty_field();
  REQUIRE(action(p, 0.0, field, 0.0, 1.0).value == Catch::Approx(0.045).margin(1e-15));
  REQUIRE(action(p, 0.3, field, 0.0, 1.0).value == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("atoms are collected on the half-open window") {
  ForcingField field({{0.0, 0.0, 0.5}, {1.0, 0.3, 2.0}}, -1.0, 2.0);
  LiftedPath p{{{0.0, 0.0}, {1.0, 0.3}}};
  // the atom at the start time counts, the one at the end time does not
  auto a = action(p, 0.0, field, 0.0, 1.0);
  REQUIRE(a.value == Catch::Approx(-0.455).margin(1e-15));
  REQUIRE(a.collected == Catch::Approx(0.5));
}

TEST_CASE("mid-segment atom crossings graze instead of collecting") {
  ForcingField field({{0.5, 0.15, 3.0}}, -1.0, 2.0);
  LiftedPath p{{{0.0, 0.0}, {1.0, 0.3}}};
  auto a = action(p, 0.0, field, 0.0, 1.0);
  REQUIRE(a.collected == 0.0);
  REQUIRE(a.grazing_hits == 1);
  // with a kink anchored at the atom it collects
  LiftedPath q{{{0.0, 0.0}, {0.5, 0.15}, {1.0, 0.3}}};
  REQUIRE(action(q, 0.0, field, 0.0, 1.0).collected == Catch::Approx(3.0));
}

TEST_CASE("path queries interpolate and wind") {
  LiftedPath p{{{0.0, 0.0}, {1.0, 0.75}, {2.0, 2.0}}};
  REQUIRE(p.position(0.5) == Catch::Approx(0.375));
  REQUIRE(p.torus_position(1.5) == Catch::Approx(0.375));
  REQUIRE(p.slope_before(1.0) == Catch::Approx(0.75));
  REQUIRE(p.slope_after(1.0) == Catch::Approx(1.25));
  REQUIRE(p.winding(0.0, 2.0) == Catch::Approx(2.0));
  REQUIRE_THROWS_AS((LiftedPath{{{1.0, 0.0}, {0.5, 0.2}}}.check()), Error);
}

TEST_CASE("concat splices on matching torus positions and relifts") {
  LiftedPath x{{{0.0, 0.0}, {1.0, 1.3}}};   // ends at torus 0.3
  LiftedPath y{{{1.0, 0.3}, {2.0, 0.8}}};   // starts at torus 0.3, different lift
  auto z = concat(x, y, 1.0);
  REQUIRE(z.anchors.size() == 3);
  REQUIRE(z.position(1.0) == Catch::Approx(1.3));
  REQUIRE(z.position(2.0) == Catch::Approx(1.8));  // y shifted by +1

  LiftedPath w{{{1.0, 0.4}, {2.0, 0.8}}};
  REQUIRE_THROWS_AS(concat(x, w, 1.0), JunctionMismatch);
}

TEST_CASE("perturbation replaces the tail with one straight segment") {
  LiftedPath p{{{0.0, 0.0}, {1.0, 0.0}}};
  auto q = perturb(p, PerturbVariant::skip_terminal, 1.0, 0.2);
  REQUIRE(q.anchors.size() == 2);
  REQUIRE(q.anchors.back().time == Catch::Approx(2.0));
  REQUIRE(q.anchors.back().position == Catch::Approx(0.2));
  REQUIRE(q.slope_before(2.0) == Catch::Approx(0.1));

  LiftedPath kinked{{{0.0, 0.0}, {0.5, 0.1}, {1.0, 0.3}}};
  auto skip = perturb(kinked, PerturbVariant::skip_terminal, 0.5, 0.0);
  REQUIRE(skip.anchors.size() == 3);       // keeps the kink at 0.5
  REQUIRE(skip.anchors[1].time == 0.5);
  REQUIRE(skip.anchors.back().position == Catch::Approx(0.3));

  auto keep = perturb(kinked, PerturbVariant::keep_terminal, 0.5, 0.1);
  REQUIRE(keep.anchors.size() == 4);       // pivots at the old endpoint
  REQUIRE(keep.anchors[2].time == 1.0);
  REQUIRE(keep.anchors.back().time == Catch::Approx(1.5));
  REQUIRE(keep.anchors.back().position == Catch::Approx(0.4));
}
