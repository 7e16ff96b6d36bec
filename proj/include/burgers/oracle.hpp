#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/path.hpp"

namespace burgers {

// Exhaustive reference solver for the fixed-endpoint problem from (s,y) to
// (t,x). Enumerates every time-ordered subset of atoms in (s,t) and, per
// segment, every lift offset within K of the segment cost's convex minimum
// (the cost is strictly convex in the lift, so the integer minimum lies
// within one of the continuous one; K >= 3 swallows every tie). The
// per-segment scan is exact because each segment's lift enters only its own
// kinetic term. Deliberately independent of the DP engine it cross-checks.
struct OracleResult {
  double action = 0.0;
  std::vector<LiftedPath> paths;  // all minimizers within 1e-12 relative
  bool path_overflow = false;     // tie product exceeded the cap
};

namespace detail {
inline double oracle_edge_cost(double dt, double delta, double theta) {
  double v = delta / dt;
  return 0.5 * dt * (v - theta) * (v - theta);
}
}  // namespace detail

inline OracleResult enumerate_minimizers(const ForcingField& field, double theta, double s,
                                         double y, double t, double x, int K = 3,
                                         std::size_t path_cap = 256) {
  if (!(t > s)) throw Error("oracle window must satisfy s < t");
  if (K < 3) throw Error("oracle lift bound K must be at least 3");
  std::vector<std::size_t> idx;
  for (std::size_t j = field.first_after(s + kTimeTol); j < field.points().size(); ++j) {
    if (field.points()[j].time >= t - kTimeTol) break;
    if (field.points()[j].time > s + kTimeTol) idx.push_back(j);
  }
  if (idx.size() > 8)
    throw TooLarge("oracle limited to 8 interior atoms, got " + std::to_string(idx.size()));

  double start_weight = 0.0;
  if (auto a = field.atom_at_time(s)) {
    const auto& p = field.points()[*a];
    if (torus_dist(p.position, y) <= kTimeTol) start_weight = p.weight;
  }

  const double y0 = torus(y);
  const double x1 = torus(x);
  const double rel = 1e-12;

  struct EdgeChoice {
    double cost;                  // best kinetic cost over lifts
    std::vector<double> deltas;   // displacements achieving it within tolerance
  };

  double best = std::numeric_limits<double>::infinity();
  struct SubsetRecord {
    std::uint32_t mask;
    double total;
    std::vector<EdgeChoice> edges;
  };
  std::vector<SubsetRecord> records;

  const std::uint32_t nsub = 1u << idx.size();
  for (std::uint32_t mask = 0; mask < nsub; ++mask) {
    std::vector<std::size_t> seq;
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (mask & (1u << b)) seq.push_back(idx[b]);

    double total = -start_weight;
    std::vector<EdgeChoice> edges;
    double prev_time = s;
    double prev_pos = y0;  // torus representative; lifts handled per edge
    bool dead = false;
    for (std::size_t e = 0; e <= seq.size(); ++e) {
      double nt, np;
      if (e < seq.size()) {
        nt = field.points()[seq[e]].time;
        np = field.points()[seq[e]].position;
      } else {
        nt = t;
        np = x1;
      }
      double dt = nt - prev_time;
      if (dt <= 0) { dead = true; break; }
      double base = torus_gap(np, prev_pos);
      EdgeChoice ch;
      ch.cost = std::numeric_limits<double>::infinity();
      int k0 = static_cast<int>(std::lround(theta * dt - base));
      for (int k = k0 - K; k <= k0 + K; ++k) {
        double delta = base + k;
        double c = detail::oracle_edge_cost(dt, delta, theta);
        if (c < ch.cost - rel * std::max(1.0, std::fabs(c))) {
          ch.cost = c;
          ch.deltas.clear();
          ch.deltas.push_back(delta);
        } else if (std::fabs(c - ch.cost) <= rel * std::max(1.0, std::fabs(ch.cost))) {
          ch.deltas.push_back(delta);
        }
      }
      total += ch.cost;
      if (e < seq.size()) total -= field.points()[seq[e]].weight;
      edges.push_back(std::move(ch));
      prev_time = nt;
      prev_pos = np;
    }
    if (dead) continue;
    records.push_back({mask, total, std::move(edges)});
    best = std::min(best, total);
  }

  OracleResult out;
  out.action = best;
  const double tol = rel * std::max(1.0, std::fabs(best));
  for (const auto& rec : records) {
    if (rec.total > best + tol) continue;
    std::vector<std::size_t> seq;
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (rec.mask & (1u << b)) seq.push_back(idx[b]);
    // product of per-edge ties
    std::vector<std::vector<double>> partial = {{}};
    for (const auto& ch : rec.edges) {
      std::vector<std::vector<double>> next;
      for (const auto& pre : partial)
        for (double d : ch.deltas) {
          auto ext = pre;
          ext.push_back(d);
          next.push_back(std::move(ext));
          if (next.size() > 4 * path_cap) break;
        }
      partial = std::move(next);
    }
    for (const auto& deltas : partial) {
      if (out.paths.size() >= path_cap) { out.path_overflow = true; break; }
      std::vector<PathAnchor> anchors;
      anchors.push_back({s, y0});
      double pos = y0;
      for (std::size_t e = 0; e < deltas.size(); ++e) {
        pos += deltas[e];
        double nt = (e < seq.size()) ? field.points()[seq[e]].time : t;
        anchors.push_back({nt, pos});
      }
      out.paths.emplace_back(std::move(anchors));
    }
  }
  return out;
}

}  // namespace burgers
