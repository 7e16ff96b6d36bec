#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/minimizer.hpp"
#include "burgers/oracle.hpp"
#include "burgers/shock.hpp"
#include "burgers/sweep.hpp"

namespace burgers {

struct CriterionResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline CriterionResult guarded(const std::string& name,
                               const std::function<CriterionResult()>& fn) {
  CriterionResult r;
  r.name = name;
  try {
    r = fn();
    r.name = name;
  } catch (const std::exception& e) {
    r.pass = false;
    r.residual = std::numeric_limits<double>::infinity();
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

// (time, position) sets of the final forcing point of each minimizer
inline std::vector<std::pair<double, double>> last_atom_set(
    const std::vector<LiftedPath>& paths) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : paths) {
    const auto& a = p.anchors[p.anchors.size() - 2];
    std::pair<double, double> key{a.time, torus(a.position)};
    bool seen = false;
    for (const auto& k : out)
      if (std::fabs(k.first - key.first) <= 1e-9 && torus_dist(k.second, key.second) <= 1e-9)
        seen = true;
    if (!seen) out.push_back(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool same_atom_sets(const std::vector<std::pair<double, double>>& a,
                           const std::vector<std::pair<double, double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i].first - b[i].first) > 1e-9 || torus_dist(a[i].second, b[i].second) > 1e-9)
      return false;
  return true;
}

}  // namespace detail

// The shared 30-atom field all statistical criteria run on.
inline ForcingField acceptance_field() {
  return ForcingField::sample_fixed_count(30, ConstantWeight{1.0}, -20.0, 20.0, 4242);
}

// 1. Dynamic program agrees with exhaustive enumeration on small fields:
//    minimal actions to 1e-12 relative, identical final-atom sets.
inline CriterionResult check_dp_matches_enumeration() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  CriterionResult r;
  double worst = 0.0;
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    double L = rng.uniform(0.8, 2.5);
    double expect = rng.uniform(1.0, 5.0);
    ForcingField field({}, 0.0, 1.0);
    for (std::uint64_t s = 0;; ++s) {
      try {
        field = ForcingField::sample_compound_poisson(expect / L, ConstantWeight{1.0}, 0.0, L,
                                                      rng.next_u64());
      } catch (const DegenerateField&) {
        continue;
      }
      if (field.points().size() <= 6) break;
    }
    RegenerationPoint anchor{0.0, rng.uniform01(), 0.25};
    double theta = rng.uniform(-3.0, 3.0);
    double t = L, x = rng.uniform01();

    MinimizerEngine engine(field, theta, anchor);
    auto ms = engine.minimizers_at(t, x);
    auto oracle = enumerate_minimizers(field, theta, anchor.T_star, anchor.y_star, t, x);

    double rel = std::fabs(ms.action - oracle.action) / std::max(1.0, std::fabs(oracle.action));
    worst = std::max(worst, rel);

    std::vector<LiftedPath> engine_tight;
    for (const auto& p : ms.paths) {
      double a = action(p, theta, field, anchor.T_star, t).value;
      if (std::fabs(a - oracle.action) <= 1e-12 * std::max(1.0, std::fabs(oracle.action)))
        engine_tight.push_back(p);
    }
    if (!detail::same_atom_sets(detail::last_atom_set(engine_tight),
                                detail::last_atom_set(oracle.paths)))
      ++mismatches;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.residual = worst;
  r.pass = worst <= 1e-12 && mismatches == 0 && secs <= 60.0;
  r.detail = "max rel err " + detail::fmt(worst) + ", atom-set mismatches " +
             std::to_string(mismatches) + ", " + detail::fmt(secs) + "s";
  return r;
}

// 2. The spatial mean of the velocity profile equals theta.
inline CriterionResult check_mean_preserved(const ForcingField& field) {
  Rng rng(1002);
  CriterionResult r;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    double theta = rng.uniform(-1.5, 1.5);
    double t = rng.uniform(2.0, 19.0);
    MinimizerEngine engine(field, theta, field.regeneration_point(t, 0.5));
    worst = std::max(worst, std::fabs(engine.profile(t).mean() - theta));
  }
  r.residual = worst;
  r.pass = worst <= 1e-9;
  r.detail = "max |mean - theta| = " + detail::fmt(worst);
  return r;
}

// 3. 0 <= h_theta2 - h_theta1 <= theta2 - theta1 pointwise, h(x) = integral of u.
inline CriterionResult check_monotone_squeeze(const ForcingField& field) {
  CriterionResult r;
  const double t = 10.0;
  const int nth = 50, nx = 200;
  auto anchor = field.regeneration_point(t, 0.5);
  std::vector<std::vector<double>> h(nth, std::vector<double>(nx));
  std::vector<double> thetas(nth);
  for (int i = 0; i < nth; ++i) {
    thetas[i] = -1.5 + 3.0 * i / (nth - 1);
    MinimizerEngine engine(field, thetas[i], anchor);
    Profile prof = engine.profile(t);
    for (int j = 0; j < nx; ++j) h[i][j] = prof.integral(static_cast<double>(j) / nx);
  }
  double worst = 0.0;
  for (int i = 0; i + 1 < nth; ++i) {
    double dth = thetas[i + 1] - thetas[i];
    for (int j = 0; j < nx; ++j) {
      double d = h[i + 1][j] - h[i][j];
      worst = std::max(worst, std::max(-d, d - dth));
    }
  }
  r.residual = std::max(worst, 0.0);
  r.pass = worst <= 1e-9;
  r.detail = "max squeeze violation " + detail::fmt(worst);
  return r;
}

// 4. Winding gap is exactly 0 (ordinary) or 1 (global); no anomalies.
inline CriterionResult check_winding_gap_law(const ForcingField& field) {
  Rng rng(1004);
  CriterionResult r;
  int anomalies = 0, bad = 0, shocks = 0;
  for (int i = 0; i < 300; ++i) {
    double theta = rng.uniform(-1.5, 1.5);
    double t = rng.uniform(2.0, 19.0);
    MinimizerEngine engine(field, theta, field.regeneration_point(t, 0.5));
    try {
      for (const auto& sp : shock_set(engine, t)) {
        ++shocks;
        bool ok = (sp.winding_gap == 0 || sp.winding_gap == 1) &&
                  (sp.is_global == (sp.winding_gap == 1));
        if (!ok) ++bad;
      }
    } catch (const WindingAnomaly&) {
      ++anomalies;
    }
  }
  r.residual = anomalies + bad;
  r.pass = anomalies == 0 && bad == 0 && shocks > 0;
  r.detail = std::to_string(shocks) + " shocks, " + std::to_string(anomalies) +
             " anomalies, " + std::to_string(bad) + " bad gaps";
  return r;
}

// 5. Exactly one or two global shocks at every (theta, t).
inline CriterionResult check_global_shock_count(const ForcingField& field) {
  Rng rng(1005);
  CriterionResult r;
  int violations = 0, splits = 0;
  for (int i = 0; i < 10000; ++i) {
    double theta = rng.uniform(-1.5, 1.5);
    double t = rng.uniform(2.0, 19.0);
    MinimizerEngine engine(field, theta, field.regeneration_point(t, 0.5));
    try {
      auto pair = left_right_global(engine, t);
      if (pair.split) ++splits;
    } catch (const CountViolation&) {
      ++violations;
    } catch (const WindingAnomaly&) {
      ++violations;
    }
  }
  r.residual = violations;
  r.pass = violations == 0;
  r.detail = std::to_string(violations) + " violations, " + std::to_string(splits) +
             " split samples in 10000";
  return r;
}

// 6. Tracked global shock moves at the mean of its one-sided velocities.
inline CriterionResult check_rankine_hugoniot_velocity(const ForcingField& field) {
  CriterionResult r;
  const double theta = 0.3, t0 = 10.0, t1 = 10.3, dt = 1e-4;
  MinimizerEngine engine(field, theta, field.regeneration_point(t0, 0.5));
  auto pair = left_right_global(engine, t0);
  auto traj = track_shock(engine, t0, pair.s_right, t1, dt);

  auto near_any = [&](double t, double pad) {
    for (const auto& ev : traj.events)
      if (std::fabs(t - ev.t) <= pad) return true;
    for (const auto& p : field.points())
      if (std::fabs(t - p.time) <= pad) return true;
    return false;
  };
  double worst = 0.0;
  int kept = 0;
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i];
    const auto& b = traj.samples[i + 1];
    if (near_any(a.t, 20 * dt) || near_any(b.t, 20 * dt)) continue;
    double fd = torus_gap(b.x, a.x) / (b.t - a.t);
    worst = std::max(worst, std::fabs(fd - a.velocity));
    ++kept;
  }
  r.residual = worst;
  r.pass = worst <= 1e-3 && kept >= 100;
  r.detail = "max |fd - (uL+uR)/2| = " + detail::fmt(worst) + " over " + std::to_string(kept) +
             " samples";
  return r;
}

// 7. Freshly emitted shock pair sits at the closed-form offsets from the atom.
inline CriterionResult check_emission_offsets() {
  CriterionResult r;
  double worst = 0.0;
  for (double ye : {0.5, 0.8}) {
    std::vector<ForcingPoint> pts{{-1.0, 0.5, 3.0}, {0.0, ye, 0.5}};
    ForcingField field(std::move(pts), -2.0, 1.0);
    const ForcingPoint atom = field.points()[1];
    for (double tau : {1e-2, 1e-3, 1e-4}) {
      MinimizerEngine engine(field, 0.0, field.regeneration_point(tau, 0.5));
      auto incoming = engine.minimizers_at(atom.time, atom.position);
      auto [rl, rr] = forcing_emission(atom, 0.0, incoming, tau);
      Profile prof = engine.profile(atom.time + tau);
      for (double target : {torus(atom.position + rl), torus(atom.position + rr)}) {
        double best = 1.0;
        for (double b : prof.breakpoints) best = std::min(best, torus_dist(b, target));
        worst = std::max(worst, best);
      }
    }
  }
  r.residual = worst;
  r.pass = worst <= 1e-6;
  r.detail = "max |breakpoint - closed form| = " + detail::fmt(worst);
  return r;
}

// 8. u_theta2 - u_theta1 decomposes into breakpoint jumps; d s_right / d theta
//    equals the reciprocal velocity jump.
inline CriterionResult check_theta_jump_identity(const ForcingField& field) {
  Rng rng(1008);
  CriterionResult r;
  double worst_identity = 0.0;
  for (int i = 0; i < 100; ++i) {
    double th1 = rng.uniform(-1.5, 1.0);
    double th2 = th1 + rng.uniform(0.05, 0.5);
    double t = rng.uniform(2.0, 19.0);
    double x = rng.uniform01();
    auto side = i % 2 == 0 ? ShockSide::Left : ShockSide::Right;
    auto rep = verify_jump_identity(field, field.regeneration_point(t, 0.5), th1, th2, t, x,
                                    side);
    worst_identity = std::max(worst_identity, rep.residual);
  }

  double worst_deriv = 0.0;
  int deriv_ok = 0;
  for (int i = 0; i < 50; ++i) {
    double rel = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 3 && !(rel <= 1e-3); ++attempt) {
      double theta = rng.uniform(-1.45, 1.45);
      double t = rng.uniform(2.0, 19.0);
      auto anchor = field.regeneration_point(t, 0.5);
      double formula;
      try {
        formula = theta_derivative(field, anchor, theta, t, ShockSide::Right);
      } catch (const ZeroJump&) {
        continue;
      }
      auto pos = [&](double th) {
        MinimizerEngine engine(field, th, anchor);
        return left_right_global(engine, t).s_right;
      };
      double s0 = pos(theta);
      for (double delta : {1e-5, 1e-6}) {
        double fd = torus_gap(pos(theta + delta), s0) / delta;
        rel = std::min(rel, std::fabs(fd - formula) / std::fabs(formula));
      }
    }
    if (rel <= 1e-3) ++deriv_ok;
    worst_deriv = std::max(worst_deriv, std::min(rel, 1.0));
  }
  r.residual = worst_identity;
  r.pass = worst_identity <= 1e-8 && deriv_ok == 50;
  r.detail = "max identity residual " + detail::fmt(worst_identity) + ", derivative ok " +
             std::to_string(deriv_ok) + "/50 (worst rel " + detail::fmt(worst_deriv) + ")";
  return r;
}

struct SweepPool {
  std::vector<std::pair<double, double>> jumps;   // (t, theta*)
  std::vector<std::pair<double, double>> otimes;  // (t, theta*) with split seen
};

inline SweepPool acceptance_sweeps(const ForcingField& field) {
  SweepPool pool;
  for (double t : {6.0, 10.0, 14.0}) {
    auto sweep = global_shock_vs_theta(field, field.regeneration_point(t, 0.5), t, -1.5, 1.5,
                                       121);
    for (double th : sweep.jump_thetas) pool.jumps.emplace_back(t, th);
    for (double th : sweep.theta_otimes) pool.otimes.emplace_back(t, th);
  }
  return pool;
}

// 9. Just past a jump of s_right(., t), the pre-jump position is still a shock.
inline CriterionResult check_jump_landing(const ForcingField& field, const SweepPool& pool) {
  CriterionResult r;
  double worst = 0.0;
  int checked = 0;
  for (const auto& [t, th] : pool.jumps) {
    auto anchor = field.regeneration_point(t, 0.5);
    MinimizerEngine before(field, th - 1e-6, anchor);
    double s_pre = left_right_global(before, t).s_right;
    MinimizerEngine after(field, th + 1e-5, anchor);
    double best = 1.0;
    for (const auto& sp : shock_set(after, t)) best = std::min(best, torus_dist(sp.x, s_pre));
    worst = std::max(worst, best);
    ++checked;
  }
  r.residual = worst;
  r.pass = checked >= 1 && worst <= 1e-4;
  r.detail = std::to_string(checked) + " jumps, max landing distance " + detail::fmt(worst);
  return r;
}

// 10. At detected split parameters the two-shock indicator over a t-grid is an
//     open interval starting at the split atom's time.
inline CriterionResult check_split_window_interval(const ForcingField& field,
                                                   const SweepPool& pool) {
  CriterionResult r;
  int confirmed = 0;
  std::vector<double> seen;
  std::string notes;
  for (const auto& [t, th] : pool.otimes) {
    bool dup = false;
    for (double s : seen)
      if (std::fabs(s - th) < 1e-7) dup = true;
    if (dup) continue;
    seen.push_back(th);

    auto probe_split = [&](double tq) -> int {  // 1 split, 0 single, -1 invalid
      if (tq <= field.t_min() + 1.0 || tq >= field.t_max() - 0.5) return -1;
      try {
        MinimizerEngine engine(field, th, field.regeneration_point(tq, 0.5));
        return left_right_global(engine, tq).split ? 1 : 0;
      } catch (const Error&) {
        return -1;
      }
    };
    MinimizerEngine at(field, th, field.regeneration_point(t, 0.5));
    auto pair = left_right_global(at, t);
    if (!pair.split || !pair.split_atom) continue;
    double s_ot = pair.split_atom->time;

    bool ok = true;
    for (double off : {-0.8, -0.4, -0.2, -0.1, -0.05})
      if (probe_split(s_ot + off) == 1) ok = false;
    if (probe_split(s_ot + 1e-3) != 1) ok = false;
    bool was_true = true, ended = false;
    for (double off : {2e-3, 5e-3, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
      int v = probe_split(s_ot + off);
      if (v < 0) continue;
      if (v == 1 && ended) ok = false;  // indicator must be a single interval
      if (v == 0 && was_true) ended = true;
      was_true = v == 1;
    }
    if (ok) ++confirmed;
  }
  r.residual = confirmed;
  r.pass = confirmed >= 3;
  r.detail = std::to_string(confirmed) + " split parameters confirmed of " +
             std::to_string(seen.size()) + " candidates";
  return r;
}

// 11. Sampling hypotheses: regeneration zones exist in nearly every window and
//     sampled fields are always discrete.
inline CriterionResult check_sampling_hypotheses() {
  CriterionResult r;
  int zones = 0, degenerate = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    try {
      auto field =
          ForcingField::sample_compound_poisson(1.0, ConstantWeight{1.0}, -20.0, 20.0, seed);
      if (field.find_small_noise_zone(0.5, 10.0)) ++zones;
    } catch (const DegenerateField&) {
      ++degenerate;
    }
  }
  r.residual = zones / 1000.0;
  r.pass = zones >= 990 && degenerate == 0;
  r.detail = std::to_string(zones) + "/1000 seeds with a zone, " + std::to_string(degenerate) +
             " degenerate fields";
  return r;
}

inline std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& on_result = nullptr) {
  std::vector<CriterionResult> out;
  auto push = [&](const std::string& name, const std::function<CriterionResult()>& fn) {
    out.push_back(detail::guarded(name, fn));
    if (on_result) on_result(out.back());
  };
  ForcingField field = acceptance_field();
  push("dp_matches_enumeration", check_dp_matches_enumeration);
  push("mean_preserved", [&] { return check_mean_preserved(field); });
  push("monotone_squeeze", [&] { return check_monotone_squeeze(field); });
  push("winding_gap_law", [&] { return check_winding_gap_law(field); });
  push("global_shock_count", [&] { return check_global_shock_count(field); });
  push("rankine_hugoniot_velocity", [&] { return check_rankine_hugoniot_velocity(field); });
  push("emission_offsets", check_emission_offsets);
  push("theta_jump_identity", [&] { return check_theta_jump_identity(field); });
  SweepPool pool;
  std::string sweep_error;
  try {
    pool = acceptance_sweeps(field);
  } catch (const std::exception& e) {
    sweep_error = std::string("sweep failed: ") + e.what();
  }
  push("jump_landing_stays_shock", [&] {
    if (!sweep_error.empty()) throw Error(sweep_error);
    return check_jump_landing(field, pool);
  });
  push("split_window_interval", [&] {
    if (!sweep_error.empty()) throw Error(sweep_error);
    return check_split_window_interval(field, pool);
  });
  push("sampling_hypotheses", check_sampling_hypotheses);
  return out;
}

}  // namespace burgers
