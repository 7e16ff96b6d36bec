#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>

#include "burgers/scenario.hpp"

using namespace burgers;

TEST_CASE("scenario json round trip preserves every field") {
  Scenario sc;
  sc.seed = 99;
  sc.rate = 2.5;
  sc.weight_dist = UniformWeight{0.2, 0.9};
  sc.t_min = -8.0;
  sc.t_max = 3.0;
  sc.M = 0.75;
  sc.theta_lo = -0.5;
  sc.theta_hi = 2.0;
  sc.t_grid = 17;
  sc.x_grid = 33;
  sc.theta_grid = 9;
  sc.output_dir = "elsewhere";
  sc.theta = 0.25;
  sc.t = 1.5;

  Scenario back = scenario_from_json(scenario_to_json(sc));
  REQUIRE(back.seed == 99);
  REQUIRE(back.rate == 2.5);
  auto* u = std::get_if<UniformWeight>(&back.weight_dist);
  REQUIRE(u != nullptr);
  REQUIRE(u->lo == 0.2);
  REQUIRE(u->hi == 0.9);
  REQUIRE(back.t_min == -8.0);
  REQUIRE(back.t_max == 3.0);
  REQUIRE(back.M == 0.75);
  REQUIRE(back.theta_lo == -0.5);
  REQUIRE(back.theta_hi == 2.0);
  REQUIRE(back.t_grid == 17);
  REQUIRE(back.x_grid == 33);
  REQUIRE(back.theta_grid == 9);
  REQUIRE(back.output_dir == "elsewhere");
  REQUIRE(back.theta.has_value());
  REQUIRE(*back.theta == 0.25);
  REQUIRE(back.t.has_value());
  REQUIRE(*back.t == 1.5);
  REQUIRE_NOTHROW(back.validate());
}

TEST_CASE("weight dist json understands all three families") {
  auto c = weight_dist_from_json(weight_dist_to_json(ConstantWeight{1.5}));
  REQUIRE(std::get<ConstantWeight>(c).value == 1.5);
  auto e = weight_dist_from_json(weight_dist_to_json(ExponentialWeight{0.7}));
  REQUIRE(std::get<ExponentialWeight>(e).mean == 0.7);
  nlohmann::json bad;
  bad["type"] = "gamma";
  REQUIRE_THROWS_AS(weight_dist_from_json(bad), Error);
}

TEST_CASE("scenario validation rejects bad inputs") {
  auto broken = [](auto mutate) {
    Scenario sc;
    mutate(sc);
    return sc;
  };
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.rate = 0.0; }).validate(), Error);
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.M = -1.0; }).validate(), Error);
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.t_min = 5.0; s.t_max = -5.0; }).validate(),
                    Error);
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.theta_lo = 2.0; s.theta_hi = 1.0; }).validate(),
                    Error);
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.x_grid = 1; }).validate(), Error);
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.theta = 9.0; }).validate(), Error);
  REQUIRE_THROWS_AS(broken([](Scenario& s) { s.t = 50.0; }).validate(), Error);
  REQUIRE_THROWS_AS(
      broken([](Scenario& s) { s.weight_dist = ConstantWeight{-2.0}; }).validate(), Error);
  REQUIRE_NOTHROW(Scenario{}.validate());
}

TEST_CASE("environment variable overrides the output directory") {
  Scenario sc;
  sc.output_dir = "from_config";
  unsetenv("BURGERS_OUTPUT_DIR");
  REQUIRE(resolve_output_dir(sc) == "from_config");
  setenv("BURGERS_OUTPUT_DIR", "from_env", 1);
  REQUIRE(resolve_output_dir(sc) == "from_env");
  unsetenv("BURGERS_OUTPUT_DIR");
}

TEST_CASE("profile csv carries grid and shock rows in order") {
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  MinimizerEngine engine(field, 0.0, RegenerationPoint{0.0, 0.0, 0.5});
  std::ostringstream os;
  write_profile_csv(os, engine, 0.0, 1.0, 8);

  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  REQUIRE(line == "theta,t,x,u_left,u_right,is_shock,is_global");
  int rows = 0, shock_rows = 0, global_rows = 0;
  double prev_x = -1.0;
  while (std::getline(is, line)) {
    ++rows;
    std::istringstream cell(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(cell, tok, ',')) cols.push_back(tok);
    REQUIRE(cols.size() == 7);
    double x = std::stod(cols[2]);
    REQUIRE(x >= prev_x - 1e-15);
    prev_x = x;
    if (cols[5] == "1") {
      ++shock_rows;
      REQUIRE(std::stod(cols[3]) > std::stod(cols[4]));
    }
    if (cols[6] == "1") ++global_rows;
  }
  REQUIRE(rows == 9);  // 8 grid cells + 1 shock
  REQUIRE(shock_rows == 1);
  REQUIRE(global_rows == 1);

  // byte-identical on repeat
  std::ostringstream os2;
  write_profile_csv(os2, engine, 0.0, 1.0, 8);
  REQUIRE(os.str() == os2.str());
}

TEST_CASE("sweep csv has one row per grid sample") {
  ForcingField field(std::vector<ForcingPoint>{}, -1.0, 2.0);
  auto sweep =
      global_shock_vs_theta(field, RegenerationPoint{0.0, 0.0, 0.5}, 1.0, -0.2, 0.2, 11);
  std::ostringstream os;
  write_sweep_csv(os, sweep);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  REQUIRE(line == "t,theta,s_left,s_right,dtheta_s_right");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  REQUIRE(rows == 11);
}

TEST_CASE("trajectory csv annotates events near their sample") {
  ShockTrajectory traj;
  traj.theta = 0.3;
  for (int i = 0; i <= 10; ++i)
    traj.samples.push_back({0.1 * i, 0.5, 1.0, -1.0, 0.0});
  traj.events.push_back({0.42, 0.5, "merge"});
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  REQUIRE(line == "theta,t,x,u_left,u_right,event");
  int annotated = 0;
  std::string annotated_line;
  while (std::getline(is, line)) {
    if (line.size() >= 5 && line.substr(line.size() - 5) == "merge") {
      ++annotated;
      annotated_line = line;
    }
  }
  REQUIRE(annotated == 1);
  REQUIRE(annotated_line.substr(0, annotated_line.find(',')) == "0.29999999999999999");
}
