#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/path.hpp"

namespace burgers {

// Cost-to-reach table entry for one forcing point. `cost` includes the
// node's own weight (collected on arrival); `preds` lists every optimal
// incoming edge within the tie tolerance as (predecessor node, lifted
// displacement along the edge).
struct NodePotential {
  double time = 0.0;
  double position = 0.0;  // torus representative in [0,1)
  double weight = 0.0;
  double cost = 0.0;
  double winding = 0.0;  // lifted displacement anchor->node of one achieving path
  struct Pred {
    int node;
    double delta;
  };
  std::vector<Pred> preds;
};

// All minimizers from the anchor to one endpoint (t,x), endpoint-matched:
// every path's terminal lifted position equals torus(x), so lifted start
// positions of distinct winding classes differ by integers. leftmost =
// minimal in the path order (largest winding, largest terminal slope).
struct MinimizerSet {
  double theta = 0.0, t = 0.0, x = 0.0;
  double action = 0.0;
  std::vector<LiftedPath> paths;
  std::vector<int> terminal_nodes;  // last forcing node per path (0 = anchor)
  std::size_t leftmost = 0, rightmost = 0;
  bool overflow = false;

  double winding_of(std::size_t i) const {
    return paths[i].end_position() - paths[i].start_position();
  }
  const LiftedPath& leftmost_path() const { return paths[leftmost]; }
  const LiftedPath& rightmost_path() const { return paths[rightmost]; }
  double u_left() const { return paths[leftmost].slope_before(t); }
  double u_right() const { return paths[rightmost].slope_before(t); }
};

// One affine piece of the terminal velocity profile on [x_lo, x_hi]:
// u(x) = (x - y_lift) / (t - s_node).
struct ProfilePiece {
  double x_lo = 0.0, x_hi = 0.0;
  int node = 0;         // engine node index (0 = anchor)
  double y_lift = 0.0;  // lifted position of the last forcing point
  double s_node = 0.0;
  double cost = 0.0;    // node potential feeding this piece
};

struct Profile {
  double theta = 0.0, t = 0.0;
  std::vector<ProfilePiece> pieces;  // cover [0,1), sorted by x_lo
  std::vector<double> breakpoints;   // boundaries in [0,1) where u jumps down

  double slope_of(const ProfilePiece& p, double x) const {
    return (x - p.y_lift) / (t - p.s_node);
  }

  const ProfilePiece& piece_at(double x) const {
    double xf = torus(x);
    for (const auto& p : pieces)
      if (xf >= p.x_lo - 1e-15 && xf < p.x_hi + 1e-15) return p;
    return pieces.back();
  }

  double velocity(double x) const { return slope_of(piece_at(x), torus(x)); }

  // (u_left, u_right) at breakpoint b; b = 0 refers to the wrap seam.
  std::pair<double, double> jump_at(double b) const {
    double ul = 0, ur = 0;
    for (const auto& p : pieces) {
      if (std::fabs(p.x_lo - b) < 1e-12) ur = slope_of(p, b);
      if (std::fabs(p.x_hi - b) < 1e-12) ul = slope_of(p, b);
    }
    if (b < 1e-12) {
      const auto& lastp = pieces.back();
      ul = slope_of(lastp, 1.0);
    }
    return {ul, ur};
  }

  // Integral of u over [0, x] for x in [0,1]; exact per piece.
  double integral(double x) const {
    double acc = 0.0;
    for (const auto& p : pieces) {
      double a = p.x_lo, b = std::min(p.x_hi, x);
      if (b <= a) continue;
      double d = t - p.s_node;
      acc += ((b - p.y_lift) * (b - p.y_lift) - (a - p.y_lift) * (a - p.y_lift)) / (2.0 * d);
    }
    return acc;
  }

  double mean() const { return integral(1.0); }
};

class MinimizerEngine {
 public:
  MinimizerEngine(const ForcingField& field, double theta, RegenerationPoint anchor,
                  std::size_t path_cap = 64)
      : field_(&field), theta_(theta), anchor_(anchor), path_cap_(path_cap) {
    build_potentials();
  }

  const ForcingField& field() const { return *field_; }
  double theta() const { return theta_; }
  const RegenerationPoint& anchor() const { return anchor_; }
  const std::vector<NodePotential>& potentials() const { return nodes_; }

  MinimizerSet minimizers_at(double t, double x) const {
    if (!(t > anchor_.T_star + kTimeTol))
      throw Error("query time must lie strictly after the anchor");
    const double xf = torus(x);
    double best = std::numeric_limits<double>::infinity();
    std::vector<NodePotential::Pred> ties;  // (node, terminal displacement)
    for (int i = 0; i < int(nodes_.size()); ++i) {
      const auto& nd = nodes_[i];
      if (!(nd.time < t - kTimeTol)) continue;
      double dt = t - nd.time;
      double base = torus_gap(xf, nd.position);
      int kstar = int(std::lround(theta_ * dt - base));
      for (int k = kstar - 2; k <= kstar + 2; ++k) {
        double delta = base + k;
        double v = delta / dt;
        double total = nd.cost + 0.5 * dt * (v - theta_) * (v - theta_);
        double tol = action_tie_tol(total);
        if (total < best - tol) {
          best = total;
          ties.clear();
          ties.push_back({i, delta});
        } else if (total <= best + tol) {
          ties.push_back({i, delta});
        }
      }
    }
    if (ties.empty()) throw Error("no admissible terminal candidate");

    MinimizerSet out;
    out.theta = theta_;
    out.t = t;
    out.x = xf;
    out.action = best;

    for (const auto& tc : ties) {
      std::vector<PathAnchor> tail = {{t, xf}};
      expand(tc.node, xf - tc.delta, tc.node, tail, out);
      if (out.overflow) break;
    }

    auto [lp, ln] = greedy_extreme(t, xf, ties, true);
    auto [rp, rn] = greedy_extreme(t, xf, ties, false);
    out.leftmost = locate_or_insert(out, lp, ln);
    out.rightmost = locate_or_insert(out, rp, rn);
    return out;
  }

  // (u_left, u_right) at (t,x): terminal slopes of the order extremes.
  std::pair<double, double> boundary_values(double t, double x) const {
    auto ms = minimizers_at(t, x);
    return {ms.u_left(), ms.u_right()};
  }

  // Terminal velocity profile at time t: lower envelope over one period of
  // the parabolas F(x) = cost(node) + (x - y - theta*d)^2 / (2d), d = t - s.
  Profile profile(double t) const {
    if (!(t > anchor_.T_star + kTimeTol))
      throw Error("profile time must lie strictly after the anchor");
    struct Cand {
      int node;
      double y;  // lifted last-point position
      double d;  // t - s_node
      double A;  // node potential
      double z;  // apex y + theta*d
    };
    std::vector<Cand> cands;
    double U = std::numeric_limits<double>::infinity();
    for (const auto& nd : nodes_)
      if (nd.time < t - kTimeTol) U = std::min(U, nd.cost + 1.0 / (8.0 * (t - nd.time)));
    for (int i = 0; i < int(nodes_.size()); ++i) {
      const auto& nd = nodes_[i];
      if (!(nd.time < t - kTimeTol)) continue;
      double d = t - nd.time;
      if (nd.cost > U + action_tie_tol(U)) continue;
      double R = std::sqrt(std::max(0.0, 2.0 * d * (U - nd.cost))) + 1e-9;
      int klo = int(std::ceil(-R - nd.position - theta_ * d));
      int khi = int(std::floor(1.0 + R - nd.position - theta_ * d));
      for (int k = klo; k <= khi; ++k) {
        double y = nd.position + k;
        cands.push_back({i, y, d, nd.cost, y + theta_ * d});
      }
    }
    if (cands.empty()) throw Error("profile has no candidates");

    auto value = [](const Cand& c, double x) {
      double r = x - c.z;
      return c.A + r * r / (2.0 * c.d);
    };
    auto deriv = [](const Cand& c, double x) { return (x - c.z) / c.d; };

    Profile prof;
    prof.theta = theta_;
    prof.t = t;

    std::size_t cur = 0;
    double bv = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cands.size(); ++c) {
      double v = value(cands[c], 0.0);
      if (v < bv - 1e-14) {
        bv = v;
        cur = c;
      } else if (v <= bv + 1e-12 && deriv(cands[c], 0.0) < deriv(cands[cur], 0.0)) {
        cur = c;  // tie at the seam: keep the branch that stays minimal for x > 0
      }
    }

    double x = 0.0;
    int guard = 0;
    while (x < 1.0) {
      if (++guard > 8192) throw Error("profile envelope sweep did not converge");
      double xs = 2.0;
      std::size_t nxt = cur;
      const Cand& p = cands[cur];
      for (std::size_t c = 0; c < cands.size(); ++c) {
        if (c == cur) continue;
        const Cand& q = cands[c];
        double roots[2];
        int nroots = 0;
        if (std::fabs(p.d - q.d) < 1e-15) {
          if (std::fabs(p.z - q.z) < 1e-15) continue;  // identical parabola
          roots[nroots++] = (p.z + q.z) / 2.0 + p.d * (q.A - p.A) / (q.z - p.z);
        } else {
          double a = 0.5 / p.d - 0.5 / q.d;
          double b = -p.z / p.d + q.z / q.d;
          double cc = p.z * p.z / (2 * p.d) - q.z * q.z / (2 * q.d) + p.A - q.A;
          double disc = b * b - 4 * a * cc;
          if (disc < 0) continue;
          double sq = std::sqrt(disc);
          double q0 = -0.5 * (b + (b >= 0 ? sq : -sq));
          roots[nroots++] = q0 / a;
          if (std::fabs(q0) > 0 && std::fabs(cc / q0 - q0 / a) > 1e-15)
            roots[nroots++] = cc / q0;
        }
        for (int ri = 0; ri < nroots; ++ri) {
          double r = roots[ri];
          if (!(r > x + 1e-13 && r <= 1.0 + 1e-13)) continue;
          if (!(deriv(q, r) < deriv(p, r) - 1e-13)) continue;  // q must dip below
          if (r < xs) {
            xs = r;
            nxt = c;
          }
        }
      }
      double stop = std::min(xs, 1.0);
      prof.pieces.push_back({x, stop, p.node, p.y, t - p.d, p.A});
      if (xs > 1.0) break;
      if (xs < 1.0) prof.breakpoints.push_back(xs);
      x = xs;
      cur = nxt;
    }
    if (prof.pieces.empty() || prof.pieces.back().x_hi < 1.0 - 1e-12)
      throw Error("profile envelope does not cover the period");
    prof.pieces.back().x_hi = 1.0;

    // wrap seam: a breakpoint at x=0 unless the last piece is the first piece
    // shifted by one lift
    const auto& first = prof.pieces.front();
    const auto& last = prof.pieces.back();
    bool seamless =
      first.node == last.node && std::fabs(last.y_lift - first.y_lift - 1.0) < 1e-12;
    if (!seamless) prof.breakpoints.insert(prof.breakpoints.begin(), 0.0);
    return prof;
  }

 private:
  const ForcingField* field_;
  double theta_;
  RegenerationPoint anchor_;
  std::size_t path_cap_;
  std::vector<NodePotential> nodes_;

  void build_potentials() {
    nodes_.clear();
    NodePotential a;
    a.time = anchor_.T_star;
    a.position = torus(anchor_.y_star);
    if (auto ai = field_->atom_at_time(anchor_.T_star)) {
      const auto& p = field_->points()[*ai];
      if (torus_dist(p.position, anchor_.y_star) <= 1e-9) a.weight = p.weight;
    }
    a.cost = -a.weight;
    nodes_.push_back(a);

    for (std::size_t j = field_->first_after(anchor_.T_star + kTimeTol);
         j < field_->points().size(); ++j) {
      const auto& p = field_->points()[j];
      NodePotential nd;
      nd.time = p.time;
      nd.position = p.position;
      nd.weight = p.weight;
      nodes_.push_back(nd);
    }

    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      auto& nd = nodes_[i];
      double best = std::numeric_limits<double>::infinity();
      double best_winding = 0.0;
      std::vector<NodePotential::Pred> preds;
      for (std::size_t j = 0; j < i; ++j) {
        const auto& pr = nodes_[j];
        double dt = nd.time - pr.time;
        double base = torus_gap(nd.position, pr.position);
        int kstar = int(std::lround(theta_ * dt - base));
        for (int k = kstar - 2; k <= kstar + 2; ++k) {
          double delta = base + k;
          double v = delta / dt;
          double total = pr.cost + 0.5 * dt * (v - theta_) * (v - theta_);
          double tol = action_tie_tol(total);
          if (total < best - tol) {
            best = total;
            best_winding = pr.winding + delta;
            preds.clear();
            preds.push_back({int(j), delta});
          } else if (total <= best + tol) {
            preds.push_back({int(j), delta});
          }
        }
      }
      nd.cost = best - nd.weight;
      nd.winding = best_winding;
      nd.preds = std::move(preds);
    }
  }

  // Depth-first expansion of every optimal path ending at `node` with lifted
  // position `pos`. `tail` holds the suffix in reverse (endpoint first).
  void expand(int node, double pos, int terminal, std::vector<PathAnchor>& tail,
              MinimizerSet& out) const {
    tail.push_back({nodes_[node].time, pos});
    if (node == 0) {
      if (out.paths.size() >= path_cap_) {
        out.overflow = true;
      } else {
        out.paths.emplace_back(std::vector<PathAnchor>(tail.rbegin(), tail.rend()));
        out.terminal_nodes.push_back(terminal);
      }
    } else {
      for (const auto& pd : nodes_[node].preds) {
        if (out.overflow) break;
        expand(pd.node, pos - pd.delta, terminal, tail, out);
      }
    }
    tail.pop_back();
  }

  // Greedy order extreme: walking backward from the endpoint, the leftmost
  // minimizer always takes the steepest tied edge (largest slope), the
  // rightmost the shallowest. Exact because distinct minimizers can only
  // cross at forcing points, so the pointwise envelope follows tied edges.
  std::pair<LiftedPath, int> greedy_extreme(double t, double xf,
                                            const std::vector<NodePotential::Pred>& ties,
                                            bool want_leftmost) const {
    auto better = [&](double slope, double cur, double tnew, double tcur) {
      if (want_leftmost ? slope > cur + 1e-13 : slope < cur - 1e-13) return true;
      if (std::fabs(slope - cur) <= 1e-13 && tnew > tcur) return true;  // grazing tie
      return false;
    };
    const NodePotential::Pred* pick = nullptr;
    double pick_slope = 0.0;
    for (const auto& tc : ties) {
      double slope = tc.delta / (t - nodes_[tc.node].time);
      if (!pick || better(slope, pick_slope, nodes_[tc.node].time, nodes_[pick->node].time)) {
        pick = &tc;
        pick_slope = slope;
      }
    }
    int terminal = pick->node;
    std::vector<PathAnchor> rev = {{t, xf}};
    int node = pick->node;
    double pos = xf - pick->delta;
    while (true) {
      rev.push_back({nodes_[node].time, pos});
      if (node == 0) break;
      const NodePotential::Pred* bestp = nullptr;
      double bslope = 0.0;
      for (const auto& pd : nodes_[node].preds) {
        double dt = nodes_[node].time - nodes_[pd.node].time;
        double slope = pd.delta / dt;
        if (!bestp || better(slope, bslope, nodes_[pd.node].time, nodes_[bestp->node].time)) {
          bestp = &pd;
          bslope = slope;
        }
      }
      pos -= bestp->delta;
      node = bestp->node;
    }
    return {LiftedPath(std::vector<PathAnchor>(rev.rbegin(), rev.rend())), terminal};
  }

  static bool same_path(const LiftedPath& a, const LiftedPath& b) {
    if (a.anchors.size() != b.anchors.size()) return false;
    for (std::size_t i = 0; i < a.anchors.size(); ++i)
      if (std::fabs(a.anchors[i].time - b.anchors[i].time) > kTimeTol ||
          std::fabs(a.anchors[i].position - b.anchors[i].position) > 1e-9)
        return false;
    return true;
  }

  static std::size_t locate_or_insert(MinimizerSet& out, const LiftedPath& p, int terminal) {
    for (std::size_t i = 0; i < out.paths.size(); ++i)
      if (same_path(out.paths[i], p)) return i;
    out.paths.push_back(p);
    out.terminal_nodes.push_back(terminal);
    return out.paths.size() - 1;
  }
};

// Pointwise order comparison of two endpoint-matched lifted paths ending at
// the same (t, x). "Left" means larger integral of X' from any r to t, i.e.
// smaller lifted positions once the endpoints agree. Returns -1 when a is
// weakly left of b, +1 when right, 0 when equal, +2 when incomparable.
inline int order_compare(const LiftedPath& a, const LiftedPath& b) {
  if (std::fabs(a.end_position() - b.end_position()) > 1e-9 ||
      std::fabs(a.end_time() - b.end_time()) > kTimeTol)
    throw Error("order comparison needs endpoint-matched paths");
  double lo = std::max(a.start_time(), b.start_time());
  std::vector<double> times;
  for (const auto& an : a.anchors)
    if (an.time >= lo) times.push_back(an.time);
  for (const auto& bn : b.anchors)
    if (bn.time >= lo) times.push_back(bn.time);
  std::sort(times.begin(), times.end());
  bool le = true, ge = true;
  for (double r : times) {
    double d = a.position(r) - b.position(r);
    if (d > 1e-9) le = false;
    if (d < -1e-9) ge = false;
  }
  if (le && ge) return 0;
  if (le) return -1;
  if (ge) return 1;
  return 2;
}

struct ClassExtremes {
  double winding = 0.0;
  std::vector<std::size_t> members;
  std::size_t leftmost = 0, rightmost = 0;
};

// Partition a MinimizerSet by winding and find the order extremes per class.
// Classes sorted by decreasing winding (the leftmost minimizer's class first).
inline std::vector<ClassExtremes> winding_class_extremes(const MinimizerSet& ms) {
  std::vector<ClassExtremes> classes;
  for (std::size_t i = 0; i < ms.paths.size(); ++i) {
    double w = ms.winding_of(i);
    auto it = std::find_if(classes.begin(), classes.end(), [&](const ClassExtremes& c) {
      return std::fabs(c.winding - w) < kWindingSnapTol;
    });
    if (it == classes.end()) {
      classes.push_back({w, {i}, i, i});
    } else {
      it->members.push_back(i);
      if (order_compare(ms.paths[i], ms.paths[it->leftmost]) == -1) it->leftmost = i;
      if (order_compare(ms.paths[i], ms.paths[it->rightmost]) == 1) it->rightmost = i;
    }
  }
  std::sort(classes.begin(), classes.end(),
            [](const ClassExtremes& a, const ClassExtremes& b) { return a.winding > b.winding; });
  return classes;
}

}  // namespace burgers
