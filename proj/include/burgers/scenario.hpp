#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/minimizer.hpp"
#include "burgers/shock.hpp"
#include "burgers/sweep.hpp"

namespace burgers {

struct Scenario {
  std::uint64_t seed = 42;
  double rate = 1.0;
  WeightDist weight_dist = ConstantWeight{1.0};
  double t_min = -20.0, t_max = 20.0;
  double M = 0.5;
  double theta_lo = -1.5, theta_hi = 1.5;
  int t_grid = 50;
  int x_grid = 200;
  int theta_grid = 100;
  std::string output_dir = "out";
  std::optional<double> theta;  // single-theta commands
  std::optional<double> t;      // single-time commands

  double theta_or_default() const { return theta.value_or(0.5 * (theta_lo + theta_hi)); }
  double t_or_default() const { return t.value_or(0.5 * (t_min + t_max)); }

  void validate() const {
    if (rate <= 0.0) throw Error("rate must be positive");
    if (M <= 0.0) throw Error("M must be positive");
    if (!(t_min < t_max)) throw Error("window must satisfy t_min < t_max");
    if (!(theta_lo <= theta_hi)) throw Error("theta_range must be ordered");
    if (t_grid < 2 || x_grid < 2 || theta_grid < 2) throw Error("grids need at least 2 cells");
    burgers::validate(weight_dist);
    if (theta && (*theta < theta_lo - 1e-12 || *theta > theta_hi + 1e-12))
      throw Error("theta lies outside theta_range");
    if (t && (*t <= t_min || *t >= t_max)) throw Error("t lies outside the window");
  }
};

inline nlohmann::json weight_dist_to_json(const WeightDist& d) {
  nlohmann::json j;
  if (const auto* c = std::get_if<ConstantWeight>(&d)) {
    j["type"] = "constant";
    j["value"] = c->value;
  } else if (const auto* e = std::get_if<ExponentialWeight>(&d)) {
    j["type"] = "exponential";
    j["mean"] = e->mean;
  } else {
    const auto& u = std::get<UniformWeight>(d);
    j["type"] = "uniform";
    j["lo"] = u.lo;
    j["hi"] = u.hi;
  }
  return j;
}

inline WeightDist weight_dist_from_json(const nlohmann::json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "constant") return ConstantWeight{j.at("value").get<double>()};
  if (type == "exponential") return ExponentialWeight{j.at("mean").get<double>()};
  if (type == "uniform")
    return UniformWeight{j.at("lo").get<double>(), j.at("hi").get<double>()};
  throw InvalidDistribution("unknown weight distribution: " + type);
}

inline nlohmann::json scenario_to_json(const Scenario& sc) {
  nlohmann::json j;
  j["seed"] = sc.seed;
  j["rate"] = sc.rate;
  j["weight_dist"] = weight_dist_to_json(sc.weight_dist);
  j["window"] = {sc.t_min, sc.t_max};
  j["M"] = sc.M;
  j["theta_range"] = {sc.theta_lo, sc.theta_hi};
  j["t_grid"] = sc.t_grid;
  j["x_grid"] = sc.x_grid;
  j["theta_grid"] = sc.theta_grid;
  j["output_dir"] = sc.output_dir;
  if (sc.theta) j["theta"] = *sc.theta;
  if (sc.t) j["t"] = *sc.t;
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  try {
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rate")) sc.rate = j.at("rate").get<double>();
    if (j.contains("weight_dist")) sc.weight_dist = weight_dist_from_json(j.at("weight_dist"));
    if (j.contains("window")) {
      sc.t_min = j.at("window").at(0).get<double>();
      sc.t_max = j.at("window").at(1).get<double>();
    }
    if (j.contains("M")) sc.M = j.at("M").get<double>();
    if (j.contains("theta_range")) {
      sc.theta_lo = j.at("theta_range").at(0).get<double>();
      sc.theta_hi = j.at("theta_range").at(1).get<double>();
    }
    if (j.contains("t_grid")) sc.t_grid = j.at("t_grid").get<int>();
    if (j.contains("x_grid")) sc.x_grid = j.at("x_grid").get<int>();
    if (j.contains("theta_grid")) sc.theta_grid = j.at("theta_grid").get<int>();
    if (j.contains("output_dir")) sc.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("theta")) sc.theta = j.at("theta").get<double>();
    if (j.contains("t")) sc.t = j.at("t").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Error("cannot open config: " + path);
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
  std::fclose(f);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return scenario_from_json(j);
}

// honors the output-dir override from the environment
inline std::string resolve_output_dir(const Scenario& sc) {
  if (const char* env = std::getenv("BURGERS_OUTPUT_DIR"); env && *env) return env;
  return sc.output_dir;
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// rows: theta,t,x,u_left,u_right,is_shock,is_global
// One row per x-grid cell plus one per profile breakpoint, sorted by x.
inline void write_profile_csv(std::ostream& os, const MinimizerEngine& engine, double theta,
                              double t, int x_grid) {
  const Profile prof = engine.profile(t);
  auto shocks = shock_set(engine, t);
  struct Row {
    double x, ul, ur;
    bool is_shock, is_global;
  };
  std::vector<Row> rows;
  for (int i = 0; i < x_grid; ++i) {
    double x = static_cast<double>(i) / x_grid;
    double u = prof.velocity(x);
    rows.push_back({x, u, u, false, false});
  }
  for (const auto& sp : shocks) rows.push_back({sp.x, sp.u_left, sp.u_right, true, sp.is_global});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.x < b.x || (a.x == b.x && a.is_shock < b.is_shock);
  });
  os << "theta,t,x,u_left,u_right,is_shock,is_global\n";
  for (const auto& r : rows)
    os << fmt_double(theta) << ',' << fmt_double(t) << ',' << fmt_double(r.x) << ','
       << fmt_double(r.ul) << ',' << fmt_double(r.ur) << ',' << (r.is_shock ? 1 : 0) << ','
       << (r.is_global ? 1 : 0) << '\n';
}

// rows: t,theta,s_left,s_right,dtheta_s_right
inline void write_sweep_csv(std::ostream& os, const ThetaSweep& sweep) {
  os << "t,theta,s_left,s_right,dtheta_s_right\n";
  for (const auto& s : sweep.samples)
    os << fmt_double(sweep.t) << ',' << fmt_double(s.theta) << ',' << fmt_double(s.s_left)
       << ',' << fmt_double(s.s_right) << ',' << fmt_double(s.dtheta_s_right) << '\n';
}

// rows: theta,t,x,u_left,u_right,event
// Events are annotated on the nearest sample row.
inline void write_trajectory_csv(std::ostream& os, const ShockTrajectory& traj) {
  os << "theta,t,x,u_left,u_right,event\n";
  for (const auto& s : traj.samples) {
    std::string event;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ev : traj.events) {
      double d = std::fabs(ev.t - s.t);
      if (d < best) {
        best = d;
        event = ev.kind;
      }
    }
    bool annotate = false;
    if (!traj.events.empty() && traj.samples.size() >= 2) {
      double step = traj.samples[1].t - traj.samples[0].t;
      annotate = best <= 0.5 * step + kTimeTol;
    }
    os << fmt_double(traj.theta) << ',' << fmt_double(s.t) << ',' << fmt_double(s.x) << ','
       << fmt_double(s.u_left) << ',' << fmt_double(s.u_right) << ','
       << (annotate ? event : "") << '\n';
  }
}

}  // namespace burgers
