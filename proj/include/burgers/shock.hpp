#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/minimizer.hpp"
#include "burgers/path.hpp"

namespace burgers {

struct ShockPoint {
  double theta = 0.0, t = 0.0, x = 0.0;
  double u_left = 0.0, u_right = 0.0;
  double T_vee = 0.0;     // merge time of the order extremes
  int winding_gap = 0;    // lifted displacement gap over [T_vee, t]; 0 or 1
  bool is_global = false; // winding_gap == 1
};

// Largest s < t at which the two endpoint-matched paths coincide on the
// circle (lifted difference integral). Identical tails resolve to the last
// shared anchor strictly before t.
inline double merge_time(const LiftedPath& left, const LiftedPath& right) {
  double t = left.end_time();
  if (std::fabs(right.end_time() - t) > kTimeTol ||
      std::fabs(left.end_position() - right.end_position()) > 1e-9)
    throw Error("merge_time needs endpoint-matched paths");
  double lo = std::max(left.start_time(), right.start_time());
  std::vector<double> times;
  for (const auto& a : left.anchors)
    if (a.time >= lo - kTimeTol) times.push_back(a.time);
  for (const auto& a : right.anchors)
    if (a.time >= lo - kTimeTol) times.push_back(a.time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return b - a < kTimeTol; }),
              times.end());

  auto is_int = [](double v) { return std::fabs(v - std::round(v)) <= 1e-9; };
  for (std::size_t seg = times.size() - 1; seg-- > 0;) {
    double r1 = times[seg], r2 = times[seg + 1];
    double d1 = left.position(r1) - right.position(r1);
    double d2 = left.position(r2) - right.position(r2);
    if (std::fabs(d2 - d1) <= 1e-12) {
      if (!is_int(d1)) continue;
      // whole segment coincides on the circle
      return r2 < t - kTimeTol ? r2 : r1;
    }
    double mlo = std::ceil(std::min(d1, d2) - 1e-9);
    double mhi = std::floor(std::max(d1, d2) + 1e-9);
    double best = -std::numeric_limits<double>::infinity();
    for (double m = mlo; m <= mhi; m += 1.0) {
      double s = r1 + (m - d1) * (r2 - r1) / (d2 - d1);
      if (s < r1 - 1e-12 || s > r2 + 1e-12) continue;
      if (s >= t - kTimeTol) continue;
      best = std::max(best, s);
    }
    if (best > -std::numeric_limits<double>::infinity()) return best;
  }
  throw Error("paths never coincide before t");
}

// Winding gap of an extreme pair over [T_vee, t]: integral of X_L' - X_R'.
// Values outside {0,1} are structurally impossible and raise WindingAnomaly.
inline int winding_gap(const LiftedPath& left, const LiftedPath& right, double T_vee) {
  double gap = -(left.position(T_vee) - right.position(T_vee));
  double snapped = std::round(gap);
  if (std::fabs(gap - snapped) > kWindingSnapTol)
    throw WindingAnomaly("winding gap " + std::to_string(gap) + " is not an integer");
  int g = int(snapped);
  if (g != 0 && g != 1)
    throw WindingAnomaly("winding gap " + std::to_string(g) + " outside {0,1}");
  return g;
}

inline ShockPoint classify_shock(const MinimizerSet& ms) {
  ShockPoint sp;
  sp.theta = ms.theta;
  sp.t = ms.t;
  sp.x = ms.x;
  sp.u_left = ms.u_left();
  sp.u_right = ms.u_right();
  sp.T_vee = merge_time(ms.leftmost_path(), ms.rightmost_path());
  sp.winding_gap = winding_gap(ms.leftmost_path(), ms.rightmost_path(), sp.T_vee);
  sp.is_global = sp.winding_gap == 1;
  return sp;
}

// All shocks of u(t, .): profile breakpoints classified one by one.
inline std::vector<ShockPoint> shock_set(const MinimizerEngine& engine, double t) {
  Profile prof = engine.profile(t);
  std::vector<ShockPoint> out;
  for (double b : prof.breakpoints) {
    auto ms = engine.minimizers_at(t, b);
    ShockPoint sp = classify_shock(ms);
    if (!(sp.u_left > sp.u_right + 1e-12)) continue;  // grazing tie, not a shock
    out.push_back(sp);
  }
  return out;
}

struct GlobalShockPair {
  double theta = 0.0, t = 0.0;
  double s_left = 0.0, s_right = 0.0;  // equal when only one global shock
  bool split = false;
  std::optional<ForcingPoint> split_atom;
  std::vector<ShockPoint> globals;     // the underlying shock records
};

namespace detail {
// True when the path runs through an atom strictly inside (t_lo, t_hi) that
// itself lies on a global shock; returns that atom.
inline std::optional<ForcingPoint> global_atom_on_path(const MinimizerEngine& engine,
                                                       const LiftedPath& path, double t_lo,
                                                       double t_hi) {
  for (const auto& a : path.anchors) {
    if (a.time <= t_lo + kTimeTol || a.time >= t_hi - kTimeTol) continue;
    auto idx = engine.field().atom_at_time(a.time);
    if (!idx) continue;
    const auto& atom = engine.field().points()[*idx];
    if (torus_dist(atom.position, a.position) > 1e-9) continue;
    if (atom.time <= engine.anchor().T_star + kTimeTol) continue;
    auto ms = engine.minimizers_at(atom.time, atom.position);
    if (!(ms.u_left() > ms.u_right() + 1e-9)) continue;
    ShockPoint sp = classify_shock(ms);
    if (sp.is_global) return atom;
  }
  return std::nullopt;
}
}  // namespace detail

// The one or two global shocks at time t. With two, the left/right labels
// are assigned by the split-atom membership test: the left global shock is
// the one whose rightmost minimizer passes through an atom sitting on a
// global shock after the merge time (and symmetrically for the right).
inline GlobalShockPair left_right_global(const MinimizerEngine& engine, double t) {
  GlobalShockPair pair;
  pair.theta = engine.theta();
  pair.t = t;
  auto shocks = shock_set(engine, t);
  for (const auto& sp : shocks)
    if (sp.is_global) pair.globals.push_back(sp);
  if (pair.globals.empty())
    throw CountViolation("no global shock at t = " + std::to_string(t));
  if (pair.globals.size() > 2)
    throw CountViolation("found " + std::to_string(pair.globals.size()) +
                         " global shocks, expected at most 2");
  if (pair.globals.size() == 1) {
    pair.s_left = pair.s_right = pair.globals[0].x;
    pair.split = false;
    return pair;
  }

  const ShockPoint& a = pair.globals[0];
  const ShockPoint& b = pair.globals[1];
  auto msa = engine.minimizers_at(t, a.x);
  auto msb = engine.minimizers_at(t, b.x);
  auto atom_a = detail::global_atom_on_path(engine, msa.rightmost_path(), a.T_vee, t);
  auto atom_b = detail::global_atom_on_path(engine, msb.rightmost_path(), b.T_vee, t);
  const ShockPoint* left = nullptr;
  const ShockPoint* right = nullptr;
  if (atom_a && !atom_b) {
    left = &a; right = &b; pair.split_atom = atom_a;
  } else if (atom_b && !atom_a) {
    left = &b; right = &a; pair.split_atom = atom_b;
  } else {
    throw Error("split pairing failed: left/right membership test not exclusive");
  }
  // cross-check: the right shock's leftmost minimizer must hit the same atom
  auto msr = engine.minimizers_at(t, right->x);
  auto atom_r = detail::global_atom_on_path(engine, msr.leftmost_path(), right->T_vee, t);
  if (!atom_r || std::fabs(atom_r->time - pair.split_atom->time) > kTimeTol)
    throw Error("split pairing failed: right shock does not revisit the split atom");
  pair.s_left = left->x;
  pair.s_right = right->x;
  pair.split = true;
  return pair;
}

// Offsets of the two shocks emitted by an atom, time tau after it. m is the
// incoming extreme slope minus theta, s the duration of its final segment:
//   r(tau) = tau*(theta + m) -+ sqrt(2*tau*(1 + tau/s)*weight).
// The drift term tau*(theta + m) = tau * X'(t-) makes the competing perturbed
// paths (through the atom vs re-aimed from the previous anchor) equal in
// action; substitute r into both quadratics to check.
inline std::pair<double, double> forcing_emission(const ForcingPoint& atom, double theta,
                                                  const MinimizerSet& incoming, double tau) {
  if (!(tau > 0)) throw Error("emission offset needs tau > 0");
  if (std::fabs(incoming.t - atom.time) > kTimeTol ||
      torus_dist(incoming.x, atom.position) > 1e-9)
    throw Error("incoming minimizers must end at the atom");
  auto last_duration = [](const LiftedPath& p) {
    return p.end_time() - p.anchors[p.anchors.size() - 2].time;
  };
  double mL = incoming.u_left() - theta;
  double mR = incoming.u_right() - theta;
  double sL = last_duration(incoming.leftmost_path());
  double sR = last_duration(incoming.rightmost_path());
  double rL = tau * (theta + mL) - std::sqrt(2.0 * tau * (1.0 + tau / sL) * atom.weight);
  double rR = tau * (theta + mR) + std::sqrt(2.0 * tau * (1.0 + tau / sR) * atom.weight);
  return {rL, rR};
}

struct TrajectorySample {
  double t = 0.0, x = 0.0;
  double u_left = 0.0, u_right = 0.0;
  double velocity = 0.0;
};

struct ShockEvent {
  double t = 0.0;
  double x = 0.0;
  std::string kind;  // "emission" or "merge"
};

struct ShockTrajectory {
  double theta = 0.0;
  std::vector<TrajectorySample> samples;
  std::vector<ShockEvent> events;
};

// Follow the shock at (t0, x0) by positional continuity until t1. Steps of
// dt; the tracked breakpoint may drift at most slack = 10*dt*(1+|velocity|)
// per step, otherwise the shock was lost (raises LostShock).
inline ShockTrajectory track_shock(const MinimizerEngine& engine, double t0, double x0,
                                   double t1, double dt) {
  if (!(dt > 0) || !(t1 > t0)) throw Error("tracking needs dt > 0 and t1 > t0");
  ShockTrajectory traj;
  traj.theta = engine.theta();

  auto nearest_bp = [](const Profile& prof, double x) -> std::optional<double> {
    std::optional<double> best;
    double bd = std::numeric_limits<double>::infinity();
    for (double b : prof.breakpoints) {
      double d = torus_dist(b, x);
      if (d < bd) {
        bd = d;
        best = b;
      }
    }
    return best;
  };

  Profile prof = engine.profile(t0);
  auto b0 = nearest_bp(prof, torus(x0));
  if (!b0 || torus_dist(*b0, x0) > 1e-6)
    throw Error("starting point is not a shock at t0");
  double x = *b0;
  double t = t0;
  auto push_sample = [&](const Profile& pr, double tt, double xx) {
    auto [ul, ur] = pr.jump_at(xx);
    traj.samples.push_back({tt, xx, ul, ur, 0.5 * (ul + ur)});
  };
  push_sample(prof, t, x);

  while (t < t1 - 1e-12) {
    double tn = std::min(t + dt, t1);
    double step = tn - t;
    double vel = traj.samples.back().velocity;
    double slack = 10.0 * step * (1.0 + std::fabs(vel));
    Profile pn = engine.profile(tn);
    double pred = torus(x + vel * step);
    auto bn = nearest_bp(pn, pred);
    if (!bn || torus_dist(*bn, pred) > slack)
      throw LostShock("shock lost near t = " + std::to_string(tn));

    // emission: atom crossed inside the step within reach of the shock
    for (std::size_t j = engine.field().first_after(t); j < engine.field().points().size();
         ++j) {
      const auto& atom = engine.field().points()[j];
      if (atom.time > tn) break;
      if (torus_dist(atom.position, x) <= slack)
        traj.events.push_back({atom.time, atom.position, "emission"});
    }
    // merge: a neighboring breakpoint vanished next to ours
    auto count_near = [&](const Profile& pr, double c, double rad) {
      int n = 0;
      for (double b : pr.breakpoints)
        if (torus_dist(b, c) <= rad) ++n;
      return n;
    };
    if (count_near(prof, x, 3 * slack) > count_near(pn, *bn, 3 * slack))
      traj.events.push_back({tn, *bn, "merge"});

    prof = std::move(pn);
    x = *bn;
    t = tn;
    push_sample(prof, t, x);
  }
  return traj;
}

}  // namespace burgers
