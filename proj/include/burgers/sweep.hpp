#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/minimizer.hpp"
#include "burgers/path.hpp"
#include "burgers/shock.hpp"

namespace burgers {

// The action difference of two fixed paths is affine in theta:
//   A_theta[X] - A_theta[Y] = intercept + slope * theta,
// slope = winding(Y) - winding(X), intercept = A_0[X] - A_0[Y].
struct AffineGap {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double theta) const { return intercept + slope * theta; }
  double root() const {
    if (std::fabs(slope) < 1e-15) throw ZeroJump("affine gap has zero slope");
    return -intercept / slope;
  }
};

inline AffineGap affine_action_gap(const LiftedPath& X, const LiftedPath& Y,
                                   const ForcingField& field) {
  if (std::fabs(X.start_time() - Y.start_time()) > kTimeTol ||
      std::fabs(X.end_time() - Y.end_time()) > kTimeTol)
    throw Error("affine gap needs a common time window");
  double s = X.start_time(), t = X.end_time();
  AffineGap g;
  g.slope = (Y.end_position() - Y.start_position()) - (X.end_position() - X.start_position());
  g.intercept = action(X, 0.0, field, s, t).value - action(Y, 0.0, field, s, t).value;
  return g;
}

// theta values in [theta_lo, theta_hi] where the winding signature of the
// minimizer set at (t,x) changes. The rightmost-minimizer winding is a
// nondecreasing integer-step function of theta, so bisection between
// endpoint signatures finds every jump; each jump is then refined to the
// exact root of the affine gap between the two competing paths.
inline std::vector<double> minimizer_breakpoints(const ForcingField& field,
                                                 const RegenerationPoint& anchor, double t,
                                                 double x, double theta_lo, double theta_hi,
                                                 int probe_budget = 20000) {
  if (!(theta_hi >= theta_lo)) throw Error("empty theta range");
  struct Probe {
    double winding;
    LiftedPath rightmost;
  };
  int probes = 0;
  auto eval = [&](double th) -> Probe {
    if (++probes > probe_budget)
      throw RangeTooWide("breakpoint search exhausted its probe budget");
    MinimizerEngine eng(field, th, anchor);
    auto ms = eng.minimizers_at(t, x);
    return {ms.winding_of(ms.rightmost), ms.paths[ms.rightmost]};
  };

  std::vector<double> out;
  std::function<void(double, const Probe&, double, const Probe&)> rec =
      [&](double a, const Probe& pa, double b, const Probe& pb) {
        if (std::fabs(pb.winding - pa.winding) < 0.25) return;
        if (b - a < 1e-11) {
          AffineGap g = affine_action_gap(pa.rightmost, pb.rightmost, field);
          out.push_back(g.root());
          return;
        }
        double m = 0.5 * (a + b);
        Probe pm = eval(m);
        bool left_jump = std::fabs(pm.winding - pa.winding) >= 0.25;
        bool right_jump = std::fabs(pb.winding - pm.winding) >= 0.25;
        if (!left_jump && !right_jump) return;  // cannot happen for monotone signatures
        if (left_jump && !right_jump && b - a < 1e-7 &&
            std::fabs(pm.winding - pa.winding) < 1.25) {
          AffineGap g = affine_action_gap(pa.rightmost, pm.rightmost, field);
          out.push_back(g.root());
          return;
        }
        if (left_jump) rec(a, pa, m, pm);
        if (right_jump) rec(m, pm, b, pb);
      };
  Probe plo = eval(theta_lo), phi = eval(theta_hi);
  rec(theta_lo, plo, theta_hi, phi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return b - a < 1e-10; }),
            out.end());
  return out;
}

enum class ShockSide { Left, Right };

// One-sided theta-derivative of the global shock position via the jump
// reciprocal: d/dtheta s_R(theta+, t) = 1 / (u_{L,R} - u_{R,R}) evaluated at
// x = s_R(theta, t), and symmetrically for the left side.
inline double theta_derivative(const ForcingField& field, const RegenerationPoint& anchor,
                               double theta, double t, ShockSide side) {
  MinimizerEngine eng(field, theta, anchor);
  auto pair = left_right_global(eng, t);
  double x = side == ShockSide::Right ? pair.s_right : pair.s_left;
  auto ms = eng.minimizers_at(t, x);
  auto classes = winding_class_extremes(ms);
  if (classes.size() < 2)
    throw ZeroJump("no winding class jump at the global shock position");
  const auto& top = classes.front();   // leftmost minimizer's class
  const auto& bot = classes.back();    // rightmost minimizer's class
  double jump;
  if (side == ShockSide::Right)
    jump = ms.paths[top.rightmost].slope_before(t) - ms.paths[bot.rightmost].slope_before(t);
  else
    jump = ms.paths[top.leftmost].slope_before(t) - ms.paths[bot.leftmost].slope_before(t);
  if (std::fabs(jump) < 1e-12) throw ZeroJump("velocity jump vanishes");
  return 1.0 / jump;
}

struct JumpIdentityReport {
  double lhs = 0.0;       // u_{theta2}(t,x) - u_{theta1}(t,x), chosen side
  double rhs = 0.0;       // sum of class jumps over breakpoints in the interval
  double residual = 0.0;  // |lhs - rhs|
  std::vector<double> breakpoints;
};

// Checks the exact decomposition of u_{theta2,side} - u_{theta1,side} at
// (t,x) into winding-class velocity jumps over the half-open breakpoint
// interval: (theta1, theta2] for the left solution, [theta1, theta2) for the
// right one.
inline JumpIdentityReport verify_jump_identity(const ForcingField& field,
                                               const RegenerationPoint& anchor, double theta1,
                                               double theta2, double t, double x,
                                               ShockSide side) {
  if (!(theta2 > theta1)) throw Error("need theta1 < theta2");
  JumpIdentityReport rep;
  MinimizerEngine e1(field, theta1, anchor);
  MinimizerEngine e2(field, theta2, anchor);
  auto m1 = e1.minimizers_at(t, x);
  auto m2 = e2.minimizers_at(t, x);
  rep.lhs = side == ShockSide::Left ? (m2.u_left() - m1.u_left())
                                    : (m2.u_right() - m1.u_right());

  auto bps = minimizer_breakpoints(field, anchor, t, x, theta1, theta2);
  const double edge_tol = 1e-12;
  for (double bp : bps) {
    if (side == ShockSide::Left && !(bp > theta1 + edge_tol && bp <= theta2 + edge_tol))
      continue;
    if (side == ShockSide::Right && !(bp >= theta1 - edge_tol && bp < theta2 - edge_tol))
      continue;
    MinimizerEngine eb(field, bp, anchor);
    auto ms = eb.minimizers_at(t, x);
    auto classes = winding_class_extremes(ms);
    if (classes.size() < 2) continue;  // not a global shock through (t,x): no jump
    const auto& top = classes.front();
    const auto& bot = classes.back();
    double term;
    if (side == ShockSide::Right)
      term = ms.paths[top.rightmost].slope_before(t) - ms.paths[bot.rightmost].slope_before(t);
    else
      term = ms.paths[top.leftmost].slope_before(t) - ms.paths[bot.leftmost].slope_before(t);
    rep.rhs += term;
    rep.breakpoints.push_back(bp);
  }
  rep.residual = std::fabs(rep.lhs - rep.rhs);
  return rep;
}

struct SweepSample {
  double theta = 0.0;
  double s_left = 0.0, s_right = 0.0;
  double dtheta_s_right = 0.0;
  bool split = false;
};

struct ThetaSweep {
  double t = 0.0;
  double theta_lo = 0.0, theta_hi = 0.0;
  std::vector<SweepSample> samples;   // on the regular grid
  std::vector<double> jump_thetas;    // discontinuities of s_right(., t)
  std::vector<double> theta_otimes;   // jumps where a split pair was detected
};

// Sweep the global shock position across a theta range at fixed t. Grid
// samples come from left_right_global; jumps are located by bisection on
// positional continuity, refined through the exact winding breakpoint of the
// pre-jump shock position.
inline ThetaSweep global_shock_vs_theta(const ForcingField& field,
                                        const RegenerationPoint& anchor, double t,
                                        double theta_lo, double theta_hi, int grid) {
  if (grid < 2) throw Error("theta grid needs at least 2 samples");
  ThetaSweep sweep;
  sweep.t = t;
  sweep.theta_lo = theta_lo;
  sweep.theta_hi = theta_hi;

  auto shock_pos = [&](double th) {
    MinimizerEngine eng(field, th, anchor);
    return left_right_global(eng, t);
  };

  std::vector<std::pair<double, GlobalShockPair>> grid_vals;
  for (int i = 0; i < grid; ++i) {
    double th = theta_lo + (theta_hi - theta_lo) * i / (grid - 1);
    auto pr = shock_pos(th);
    SweepSample s;
    s.theta = th;
    s.s_left = pr.s_left;
    s.s_right = pr.s_right;
    s.split = pr.split;
    try {
      s.dtheta_s_right = theta_derivative(field, anchor, th, t, ShockSide::Right);
    } catch (const ZeroJump&) {
      s.dtheta_s_right = std::numeric_limits<double>::quiet_NaN();
    }
    sweep.samples.push_back(s);
    grid_vals.emplace_back(th, pr);
  }

  // March theta with an adaptive step. Between jumps s_right moves smoothly,
  // so shrinking the step makes the move small; across a jump the move stays
  // macroscopic no matter how small the bracket gets. Each detected jump is
  // refined through the exact winding breakpoint of the minimizers at the
  // pre-jump position (the rightmost winding there steps up at the jump).
  const double h0 = (theta_hi - theta_lo) / (grid - 1);
  const double smooth_move = 0.02;  // jumps below this in position go undetected
  double theta = theta_lo;
  double s_cur = grid_vals.front().second.s_right;
  double h = h0;
  while (theta < theta_hi - 1e-12) {
    double th2 = std::min(theta + h, theta_hi);
    double s2 = shock_pos(th2).s_right;
    if (torus_dist(s_cur, s2) <= smooth_move) {
      theta = th2;
      s_cur = s2;
      h = std::min(h * 2.0, h0);
      continue;
    }
    if (th2 - theta > 1e-9) {
      h = 0.5 * (th2 - theta);
      continue;
    }
    auto bps = minimizer_breakpoints(field, anchor, t, s_cur, theta - 1e-7, th2 + 1e-7);
    double bp = bps.empty() ? 0.5 * (theta + th2) : bps.front();
    sweep.jump_thetas.push_back(bp);
    MinimizerEngine eng(field, bp, anchor);
    auto pr = left_right_global(eng, t);
    if (pr.split) sweep.theta_otimes.push_back(bp);
    theta = th2;
    s_cur = s2;
    h = h0;
  }
  std::sort(sweep.jump_thetas.begin(), sweep.jump_thetas.end());
  sweep.jump_thetas.erase(std::unique(sweep.jump_thetas.begin(), sweep.jump_thetas.end(),
                                      [](double a, double b) { return b - a < 1e-9; }),
                          sweep.jump_thetas.end());
  std::sort(sweep.theta_otimes.begin(), sweep.theta_otimes.end());
  sweep.theta_otimes.erase(std::unique(sweep.theta_otimes.begin(), sweep.theta_otimes.end(),
                                       [](double a, double b) { return b - a < 1e-9; }),
                           sweep.theta_otimes.end());
  return sweep;
}

}  // namespace burgers
