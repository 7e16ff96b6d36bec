#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "burgers/forcing.hpp"

using namespace burgers;

TEST_CASE("compound poisson sampling is deterministic per seed") {
  auto a = ForcingField::sample_compound_poisson(5.0, ConstantWeight{1.0}, 0.0, 10.0, 42);
  auto b = ForcingField::sample_compound_poisson(5.0, ConstantWeight{1.0}, 0.0, 10.0, 42);
  REQUIRE(a.points().size() == b.points().size());
  for (std::size_t i = 0; i < a.points().size(); ++i) {
    REQUIRE(a.points()[i].time == b.points()[i].time);
    REQUIRE(a.points()[i].position == b.points()[i].position);
    REQUIRE(a.points()[i].weight == b.points()[i].weight);
  }
  // Poisson(50) count: a loose sanity band
  REQUIRE(a.points().size() > 20);
  REQUIRE(a.points().size() < 100);
  auto c = ForcingField::sample_compound_poisson(5.0, ConstantWeight{1.0}, 0.0, 10.0, 43);
  bool differs = c.points().size() != a.points().size();
  if (!differs) differs = c.points()[0].time != a.points()[0].time;
  REQUIRE(differs);
}

TEST_CASE("field invariants are enforced") {
  REQUIRE_THROWS_AS((ForcingField({{0.5, 0.2, -1.0}}, 0.0, 1.0)), DegenerateField);
  REQUIRE_THROWS_AS((ForcingField({{0.5, 1.2, 1.0}}, 0.0, 1.0)), DegenerateField);
  REQUIRE_THROWS_AS((ForcingField({{1.5, 0.2, 1.0}}, 0.0, 1.0)), DegenerateField);
  REQUIRE_THROWS_AS((ForcingField({{0.5, 0.2, 1.0}, {0.5, 0.7, 1.0}}, 0.0, 1.0)),
                    DegenerateField);
  // unsorted input is fine, the field sorts by time
  ForcingField f({{0.7, 0.1, 1.0}, {0.2, 0.9, 2.0}}, 0.0, 1.0);
  REQUIRE(f.points()[0].time == 0.2);
  REQUIRE(f.points()[1].time == 0.7);
}

TEST_CASE("weight distributions validate and sample") {
  REQUIRE_THROWS_AS(validate(WeightDist{ConstantWeight{0.0}}), InvalidDistribution);
  REQUIRE_THROWS_AS(validate(WeightDist{ExponentialWeight{-1.0}}), InvalidDistribution);
  REQUIRE_THROWS_AS(validate(WeightDist{UniformWeight{0.0, 1.0}}), InvalidDistribution);
  REQUIRE_THROWS_AS(validate(WeightDist{UniformWeight{0.5, 0.2}}), InvalidDistribution);
  REQUIRE_NOTHROW(validate(WeightDist{UniformWeight{0.2, 0.5}}));
  REQUIRE_NOTHROW(validate(WeightDist{ExponentialWeight{0.7}}));

  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    REQUIRE(sample_weight(ExponentialWeight{0.5}, rng) > 0.0);
    double u = sample_weight(UniformWeight{0.2, 0.5}, rng);
    REQUIRE(u >= 0.2);
    REQUIRE(u <= 0.5);
  }
}

TEST_CASE("small-noise zone requires isolation and enough weight") {
  // weight below the 1/(4M) threshold is not a zone
  ForcingField weak({{-3.0, 0.5, 0.2}}, -10.0, 10.0);
  REQUIRE_FALSE(weak.find_small_noise_zone(1.0, 0.0).has_value());
  ForcingField strong({{-3.0, 0.5, 1.0}}, -10.0, 10.0);
  auto z = strong.find_small_noise_zone(1.0, 0.0);
  REQUIRE(z.has_value());
  REQUIRE(z->s == -3.0);
  REQUIRE(z->weight == 1.0);

  // a crowding neighbor destroys the zone
  ForcingField crowded({{-3.0, 0.5, 1.0}, {-2.5, 0.1, 0.1}}, -10.0, 10.0);
  REQUIRE_FALSE(crowded.find_small_noise_zone(1.0, 0.0).has_value());

  // the most recent of two zones wins
  ForcingField two({{-5.0, 0.3, 1.0}, {-2.0, 0.6, 1.0}}, -10.0, 10.0);
  auto rp = two.regeneration_point(0.0, 1.0);
  REQUIRE(rp.T_star == -2.0);
  REQUIRE(rp.y_star == 0.6);

  // zones must lie at or before t - M
  auto late = two.regeneration_point(-1.5, 1.0);
  REQUIRE(late.T_star == -5.0);

  ForcingField empty(std::vector<ForcingPoint>{}, -10.0, 10.0);
  REQUIRE_THROWS_AS(empty.regeneration_point(0.0, 1.0), NoRegeneration);
  REQUIRE_THROWS_WITH(empty.regeneration_point(0.0, 1.0),
                      Catch::Matchers::ContainsSubstring("window too short"));
}

TEST_CASE("csv serialization round trips losslessly") {
  auto field = ForcingField::sample_compound_poisson(2.0, ExponentialWeight{0.8}, -3.0, 3.0, 7);
  std::stringstream ss;
  field.serialize_csv(ss);
  auto back = ForcingField::parse_csv(ss, -3.0, 3.0);
  REQUIRE(back.points().size() == field.points().size());
  for (std::size_t i = 0; i < field.points().size(); ++i) {
    REQUIRE(back.points()[i].time == field.points()[i].time);
    REQUIRE(back.points()[i].position == field.points()[i].position);
    REQUIRE(back.points()[i].weight == field.points()[i].weight);
  }

  std::stringstream bad("time,x,w\n0.5,0.2,1\n");
  REQUIRE_THROWS_AS(ForcingField::parse_csv(bad, 0.0, 1.0), Error);
}

TEST_CASE("atom lookup by time") {
  ForcingField f({{0.2, 0.9, 2.0}, {0.7, 0.1, 1.0}}, 0.0, 1.0);
  REQUIRE(f.first_after(0.0) == 0);
  REQUIRE(f.first_after(0.2) == 1);
  REQUIRE(f.first_after(0.9) == 2);
  REQUIRE(f.atom_at_time(0.7).has_value());
  REQUIRE_FALSE(f.atom_at_time(0.5).has_value());
}
