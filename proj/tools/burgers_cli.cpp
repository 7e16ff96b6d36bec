// Command-line front end: sample forcing fields, solve velocity profiles,
// track shocks, sweep theta, run the acceptance suite, render SVG frames.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "burgers/burgers.hpp"
#include "burgers/verification.hpp"

namespace fs = std::filesystem;
using namespace burgers;

namespace {

WeightDist parse_weights(const std::string& text) {
  auto bad = [&] { return InvalidDistribution("cannot parse weight spec: " + text); };
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "constant") return ConstantWeight{std::stod(rest)};
    if (kind == "exponential") return ExponentialWeight{std::stod(rest)};
    if (kind == "uniform") {
      auto c2 = rest.find(':');
      if (c2 == std::string::npos) throw bad();
      return UniformWeight{std::stod(rest.substr(0, c2)), std::stod(rest.substr(c2 + 1))};
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  throw bad();
}

ForcingField load_or_sample(const Scenario& sc, const std::string& field_path) {
  if (!field_path.empty()) {
    std::ifstream in(field_path);
    if (!in) throw Error("cannot open field file: " + field_path);
    return ForcingField::parse_csv(in, sc.t_min, sc.t_max);
  }
  return ForcingField::sample_compound_poisson(sc.rate, sc.weight_dist, sc.t_min, sc.t_max,
                                               sc.seed);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circle Burgers flow with atomic forcing: solver and analysis tools"};
  app.require_subcommand(1);
  app.fallthrough();  // shared options may follow the subcommand name

  std::string config_path, field_path, weights_text;
  Scenario sc;
  double theta_arg = 0.0, t_arg = 0.0;

  app.add_option("--config", config_path, "scenario JSON file");
  app.add_option("--field", field_path, "forcing field CSV (t,x,w) instead of sampling");
  auto* opt_seed = app.add_option("--seed", sc.seed, "sampling seed");
  auto* opt_rate = app.add_option("--rate", sc.rate, "Poisson rate");
  auto* opt_weights =
      app.add_option("--weights", weights_text, "constant:V | exponential:MEAN | uniform:LO:HI");
  auto* opt_window = app.add_option("--window", [&](const CLI::results_t& res) {
    sc.t_min = std::stod(res.at(0));
    sc.t_max = std::stod(res.at(1));
    return true;
  }, "time window");
  opt_window->expected(2);
  auto* opt_M = app.add_option("--M", sc.M, "regeneration zone half-width");
  auto* opt_range = app.add_option("--theta-range", [&](const CLI::results_t& res) {
    sc.theta_lo = std::stod(res.at(0));
    sc.theta_hi = std::stod(res.at(1));
    return true;
  }, "mean velocity range");
  opt_range->expected(2);
  auto* opt_tg = app.add_option("--t-grid", sc.t_grid, "time resolution");
  auto* opt_xg = app.add_option("--x-grid", sc.x_grid, "space resolution");
  auto* opt_thg = app.add_option("--theta-grid", sc.theta_grid, "theta resolution");
  auto* opt_out = app.add_option("--output-dir", sc.output_dir, "output directory");
  auto* opt_theta = app.add_option("--theta", theta_arg, "mean velocity for single-theta runs");
  auto* opt_t = app.add_option("--t", t_arg, "query time");
  bool show_minimizers = false, show_u = false;
  app.add_flag("--minimizers", show_minimizers, "draw minimizers in rendered frames");
  app.add_flag("--u-profile", show_u, "draw the velocity profile panel in rendered frames");

  auto* cmd_sample = app.add_subcommand("sample", "sample a forcing field and write field.csv");
  auto* cmd_solve = app.add_subcommand("solve", "write the velocity profile at (theta, t)");
  auto* cmd_shocks = app.add_subcommand("shocks", "track the global shock from t onward");
  auto* cmd_sweep = app.add_subcommand("sweep", "global shock position across theta at fixed t");
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance suite");
  auto* cmd_render = app.add_subcommand("render", "render SVG frames across theta");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      Scenario from_file = load_scenario(config_path);
      // flags override the config file
      if (!*opt_seed) sc.seed = from_file.seed;
      if (!*opt_rate) sc.rate = from_file.rate;
      if (!*opt_weights) sc.weight_dist = from_file.weight_dist;
      if (!*opt_window) {
        sc.t_min = from_file.t_min;
        sc.t_max = from_file.t_max;
      }
      if (!*opt_M) sc.M = from_file.M;
      if (!*opt_range) {
        sc.theta_lo = from_file.theta_lo;
        sc.theta_hi = from_file.theta_hi;
      }
      if (!*opt_tg) sc.t_grid = from_file.t_grid;
      if (!*opt_xg) sc.x_grid = from_file.x_grid;
      if (!*opt_thg) sc.theta_grid = from_file.theta_grid;
      if (!*opt_out) sc.output_dir = from_file.output_dir;
      sc.theta = from_file.theta;
      sc.t = from_file.t;
    }
    if (!weights_text.empty()) sc.weight_dist = parse_weights(weights_text);
    if (*opt_theta) sc.theta = theta_arg;
    if (*opt_t) sc.t = t_arg;
    sc.validate();

    fs::path out_dir = resolve_output_dir(sc);
    fs::create_directories(out_dir);

    if (*cmd_verify) {
      bool all = true;
      run_acceptance([&](const CriterionResult& r) {
        std::printf("[%s] %-28s residual %-12.4g %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.residual, r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
      });
      std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES");
      return all ? 0 : 4;
    }

    ForcingField field = load_or_sample(sc, field_path);

    if (*cmd_sample) {
      std::ofstream out(out_dir / "field.csv", std::ios::binary);
      if (!out) throw Error("cannot write field.csv");
      field.serialize_csv(out);
      write_file(out_dir / "scenario.json", scenario_to_json(sc).dump(2) + "\n");
      return 0;
    }

    const double theta = sc.theta_or_default();
    const double t = sc.t_or_default();

    if (*cmd_solve) {
      MinimizerEngine engine(field, theta, field.regeneration_point(t, sc.M));
      std::ofstream out(out_dir / "profile.csv", std::ios::binary);
      if (!out) throw Error("cannot write profile.csv");
      write_profile_csv(out, engine, theta, t, sc.x_grid);
      return 0;
    }

    if (*cmd_shocks) {
      MinimizerEngine engine(field, theta, field.regeneration_point(t, sc.M));
      auto pair = left_right_global(engine, t);
      double t1 = std::min(t + 2.0, sc.t_max - 0.25);
      if (!(t1 > t)) throw Error("no room after t to track the shock");
      auto traj = track_shock(engine, t, pair.s_right, t1, (t1 - t) / sc.t_grid);
      std::ofstream out(out_dir / "trajectory.csv", std::ios::binary);
      if (!out) throw Error("cannot write trajectory.csv");
      write_trajectory_csv(out, traj);
      return 0;
    }

    if (*cmd_sweep) {
      auto sweep = global_shock_vs_theta(field, field.regeneration_point(t, sc.M), t,
                                         sc.theta_lo, sc.theta_hi, sc.theta_grid);
      std::ofstream out(out_dir / "sweep.csv", std::ios::binary);
      if (!out) throw Error("cannot write sweep.csv");
      write_sweep_csv(out, sweep);
      return 0;
    }

    if (*cmd_render) {
      FrameSpec spec;
      spec.t_hi = t;
      spec.t_lo = t - std::min(4.0, (t - sc.t_min) * 0.5);
      spec.show_minimizers = show_minimizers;
      spec.show_u_profile = show_u;
      spec.t_samples = sc.t_grid;
      std::string index = "frame,theta\n";
      for (int i = 0; i < sc.theta_grid; ++i) {
        double th = sc.theta_lo + (sc.theta_hi - sc.theta_lo) * i /
                                      std::max(1, sc.theta_grid - 1);
        MinimizerEngine engine(field, th, field.regeneration_point(t, sc.M));
        write_file(out_dir / frame_filename(i), render_frame(engine, spec));
        index += frame_filename(i) + ("," + fmt_double(th)) + "\n";
      }
      write_file(out_dir / "frames.csv", index);
      return 0;
    }
  } catch (const NoRegeneration& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
