#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"

namespace burgers {

struct PathAnchor {
  double time = 0.0;
  double position = 0.0;  // lifted (universal cover) coordinate
};

// Piecewise-linear path on the universal cover of the circle. Interior
// anchors are meant to coincide with forcing atoms; the torus trace is the
// fractional part of `position`.
struct LiftedPath {
  std::vector<PathAnchor> anchors;

  LiftedPath() = default;
  explicit LiftedPath(std::vector<PathAnchor> a) : anchors(std::move(a)) { check(); }

  void check() const {
    if (anchors.size() < 2) throw Error("path needs at least two anchors");
    for (std::size_t i = 1; i < anchors.size(); ++i)
      if (!(anchors[i].time > anchors[i - 1].time))
        throw Error("path anchor times must be strictly increasing");
  }

  double start_time() const { return anchors.front().time; }
  double end_time() const { return anchors.back().time; }
  double start_position() const { return anchors.front().position; }
  double end_position() const { return anchors.back().position; }

  // Index of the last anchor with time <= r (r must be inside the domain).
  std::size_t segment_index(double r) const {
    if (r < anchors.front().time - kTimeTol || r > anchors.back().time + kTimeTol)
      throw Error("time outside path domain");
    std::size_t lo = 0;
    for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
      if (anchors[i].time <= r) lo = i;
      else break;
    }
    return lo;
  }

  double position(double r) const {
    std::size_t i = segment_index(r);
    if (i + 1 >= anchors.size()) return anchors.back().position;
    const auto& a = anchors[i];
    const auto& b = anchors[i + 1];
    double w = (r - a.time) / (b.time - a.time);
    return a.position + w * (b.position - a.position);
  }

  double torus_position(double r) const { return torus(position(r)); }

  double segment_slope(std::size_t i) const {
    const auto& a = anchors[i];
    const auto& b = anchors[i + 1];
    return (b.position - a.position) / (b.time - a.time);
  }

  // One-sided slope X'(r-).
  double slope_before(double r) const {
    if (r <= anchors.front().time + kTimeTol) throw Error("no slope before the start");
    for (std::size_t i = anchors.size() - 1; i-- > 0;)
      if (anchors[i].time < r - kTimeTol) return segment_slope(i);
    throw Error("no slope before the start");
  }

  // One-sided slope X'(r+).
  double slope_after(double r) const {
    if (r >= anchors.back().time - kTimeTol) throw Error("no slope after the end");
    for (std::size_t i = 0; i + 1 < anchors.size(); ++i)
      if (anchors[i + 1].time > r + kTimeTol) return segment_slope(i);
    throw Error("no slope after the end");
  }

  // Net lifted displacement over [a,b].
  double winding(double a, double b) const { return position(b) - position(a); }
};

struct ActionValue {
  double value = 0.0;      // kinetic - collected
  double kinetic = 0.0;    // (1/2) integral of (X'-theta)^2
  double collected = 0.0;  // total atom weight picked up on [s,t)
  int grazing_hits = 0;    // atoms crossed mid-segment (not collected, flagged)
};

// Action of `path` over [s,t) against mean parameter theta: kinetic cost of
// the clipped segments minus the weight of atoms sitting at path anchors with
// time in [s,t). The atom at time s counts, the one at t does not. Atoms the
// path merely grazes mid-segment are reported, never collected.
inline ActionValue action(const LiftedPath& path, double theta, const ForcingField& field,
                          double s, double t) {
  if (!(t >= s)) throw Error("action window must satisfy s <= t");
  if (s < path.start_time() - kTimeTol || t > path.end_time() + kTimeTol)
    throw Error("action window outside path domain");
  ActionValue out;
  for (std::size_t i = 0; i + 1 < path.anchors.size(); ++i) {
    double a = std::max(path.anchors[i].time, s);
    double b = std::min(path.anchors[i + 1].time, t);
    if (b <= a) continue;
    double v = path.segment_slope(i);
    out.kinetic += 0.5 * (b - a) * (v - theta) * (v - theta);
  }
  const auto& atoms = field.points();
  std::size_t lo = field.first_after(s - 2 * kTimeTol);
  for (std::size_t j = lo; j < atoms.size() && atoms[j].time < t - kTimeTol; ++j) {
    const auto& q = atoms[j];
    if (q.time < s - kTimeTol) continue;
    if (q.time < path.start_time() - kTimeTol || q.time > path.end_time() + kTimeTol) continue;
    bool at_anchor = false;
    for (const auto& anc : path.anchors)
      if (std::fabs(anc.time - q.time) <= kTimeTol) {
        at_anchor = true;
        if (torus_dist(anc.position, q.position) <= kTimeTol) out.collected += q.weight;
        break;
      }
    if (!at_anchor && torus_dist(path.position(q.time), q.position) <= kTimeTol)
      ++out.grazing_hits;
  }
  out.value = out.kinetic - out.collected;
  return out;
}

// Splice: X up to time r, then Y. Torus positions must agree at r within
// 1e-9; Y is re-lifted by an integer so the junction is continuous.
inline LiftedPath concat(const LiftedPath& X, const LiftedPath& Y, double r) {
  if (r < X.start_time() - kTimeTol || r > X.end_time() + kTimeTol ||
      r < Y.start_time() - kTimeTol || r > Y.end_time() + kTimeTol)
    throw JunctionMismatch("junction time outside a path domain");
  double px = X.position(r);
  double py = Y.position(r);
  double shift = std::round(px - py);
  if (std::fabs((py + shift) - px) > 1e-9)
    throw JunctionMismatch("paths disagree on the circle at the junction time");
  std::vector<PathAnchor> anchors;
  for (const auto& a : X.anchors)
    if (a.time < r - kTimeTol) anchors.push_back(a);
  anchors.push_back({r, px});
  for (const auto& a : Y.anchors)
    if (a.time > r + kTimeTol) anchors.push_back({a.time, a.position + shift});
  if (anchors.size() < 2) throw JunctionMismatch("splice leaves fewer than two anchors");
  return LiftedPath(std::move(anchors));
}

enum class PerturbVariant {
  skip_terminal,  // pivot at the last anchor strictly before the endpoint
  keep_terminal,  // pivot at the endpoint itself (must be a forcing point)
};

// Replace the tail of the path by one straight segment from the pivot to
// (end_time + tau, end_position + eta).
inline LiftedPath perturb(const LiftedPath& path, PerturbVariant variant, double tau,
                          double eta, const ForcingField* field = nullptr) {
  double t = path.end_time();
  double pivot_time;
  if (variant == PerturbVariant::keep_terminal) {
    pivot_time = t;
    if (field) {
      auto idx = field->atom_at_time(t);
      if (!idx || torus_dist(field->points()[*idx].position, path.end_position()) > kTimeTol)
        throw Error("keep_terminal needs a forcing point at the path endpoint");
    }
  } else {
    pivot_time = path.anchors[path.anchors.size() - 2].time;
  }
  if (!(t + tau > pivot_time))
    throw Error("perturbation must keep the pivot strictly before the new endpoint");
  std::vector<PathAnchor> anchors;
  for (const auto& a : path.anchors)
    if (a.time <= pivot_time + kTimeTol) anchors.push_back(a);
  double target_time = t + tau;
  double target_pos = path.end_position() + eta;
  if (target_time - anchors.back().time <= kTimeTol)
    throw Error("perturbed segment would be degenerately short");
  anchors.push_back({target_time, target_pos});
  return LiftedPath(std::move(anchors));
}

}  // namespace burgers
