#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "burgers/common.hpp"

namespace burgers {

// One atom of the forcing measure: a point mass of size `weight` at
// (time, position) with position on the unit circle [0,1).
struct ForcingPoint {
  double time = 0.0;
  double position = 0.0;
  double weight = 0.0;
};

// Weight distribution for compound-Poisson sampling.
struct ConstantWeight { double value; };
struct ExponentialWeight { double mean; };
struct UniformWeight { double lo, hi; };
using WeightDist = std::variant<ConstantWeight, ExponentialWeight, UniformWeight>;

inline void validate(const WeightDist& dist) {
  if (const auto* c = std::get_if<ConstantWeight>(&dist)) {
    if (!(c->value > 0.0)) throw InvalidDistribution("constant weight must be positive");
  } else if (const auto* e = std::get_if<ExponentialWeight>(&dist)) {
    if (!(e->mean > 0.0)) throw InvalidDistribution("exponential mean must be positive");
  } else if (const auto* u = std::get_if<UniformWeight>(&dist)) {
    if (!(u->lo > 0.0) || !(u->hi > u->lo))
      throw InvalidDistribution("uniform weight support must satisfy 0 < lo < hi");
  }
}

inline double sample_weight(const WeightDist& dist, Rng& rng) {
  if (const auto* c = std::get_if<ConstantWeight>(&dist)) return c->value;
  if (const auto* e = std::get_if<ExponentialWeight>(&dist)) return rng.exponential(e->mean);
  const auto& u = std::get<UniformWeight>(dist);
  return rng.uniform(u.lo, u.hi);
}

// A time interval (s,y) is a small-noise zone when the atom at (s,y) is the
// only one in [s-M, s+M] x T and its weight beats the detour threshold 1/(4M).
struct SmallNoiseZone {
  double s = 0.0;
  double y = 0.0;
  double weight = 0.0;
  double M = 0.0;
};

// Anchor through which every one-sided minimizer at times >= T_star + M passes.
struct RegenerationPoint {
  double T_star = 0.0;
  double y_star = 0.0;
  double M = 0.0;
};

class ForcingField {
 public:
  ForcingField(std::vector<ForcingPoint> points, double t_min, double t_max)
      : points_(std::move(points)), t_min_(t_min), t_max_(t_max) {
    if (!(t_max_ > t_min_)) throw EmptyWindow("window must have positive length");
    std::sort(points_.begin(), points_.end(),
              [](const ForcingPoint& a, const ForcingPoint& b) { return a.time < b.time; });
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!(p.weight > 0.0)) throw DegenerateField("atom weight must be positive");
      if (!(p.position >= 0.0 && p.position < 1.0))
        throw DegenerateField("atom position must lie in [0,1)");
      if (!(p.time > t_min_ && p.time < t_max_))
        throw DegenerateField("atom time must lie strictly inside the window");
      if (i > 0 && points_[i].time - points_[i - 1].time <= kTimeTol)
        throw DegenerateField("duplicate atom times within tolerance");
    }
  }

  const std::vector<ForcingPoint>& points() const { return points_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  // Index of the first atom with time > t.
  std::size_t first_after(double t) const {
    return std::upper_bound(points_.begin(), points_.end(), t,
                            [](double v, const ForcingPoint& p) { return v < p.time; }) -
           points_.begin();
  }

  // Atom whose time matches t within tolerance, if any.
  std::optional<std::size_t> atom_at_time(double t) const {
    std::size_t i = first_after(t - 2 * kTimeTol);
    if (i < points_.size() && std::fabs(points_[i].time - t) <= kTimeTol) return i;
    return std::nullopt;
  }

  // Homogeneous compound-Poisson sample on (t_min,t_max) x [0,1): atom count
  // drawn by summing exponential gaps, positions uniform, weights iid.
  static ForcingField sample_compound_poisson(double rate, const WeightDist& dist,
                                              double t_min, double t_max,
                                              std::uint64_t seed) {
    if (!(t_max > t_min)) throw EmptyWindow("window must have positive length");
    if (!(rate > 0.0)) throw InvalidDistribution("rate must be positive");
    validate(dist);
    Rng rng(seed);
    std::vector<ForcingPoint> pts;
    double t = t_min;
    while (true) {
      t += rng.exponential(1.0 / rate);
      if (t >= t_max) break;
      ForcingPoint p;
      p.time = t;
      p.position = rng.uniform01();
      p.weight = sample_weight(dist, rng);
      pts.push_back(p);
    }
    return ForcingField(std::move(pts), t_min, t_max);
  }

  // Poisson sample conditioned on the atom count: n uniform times (sorted),
  // uniform positions, iid weights.
  static ForcingField sample_fixed_count(int n, const WeightDist& dist, double t_min,
                                         double t_max, std::uint64_t seed) {
    if (!(t_max > t_min)) throw EmptyWindow("window must have positive length");
    if (n < 0) throw Error("atom count must be nonnegative");
    validate(dist);
    Rng rng(seed);
    std::vector<ForcingPoint> pts(n);
    for (auto& p : pts) p.time = t_min + rng.uniform01() * (t_max - t_min);
    std::sort(pts.begin(), pts.end(),
              [](const ForcingPoint& a, const ForcingPoint& b) { return a.time < b.time; });
    for (auto& p : pts) {
      p.position = rng.uniform01();
      p.weight = sample_weight(dist, rng);
    }
    return ForcingField(std::move(pts), t_min, t_max);
  }

  // Parse the "t,x,w" CSV format. The window is supplied by the caller (it is
  // scenario data, not field data).
  static ForcingField parse_csv(std::istream& in, double t_min, double t_max) {
    std::string line;
    if (!std::getline(in, line)) throw DegenerateField("empty field file");
    auto strip = [](std::string s) {
      s.erase(s.find_last_not_of(" \t\r\n") + 1);
      s.erase(0, s.find_first_not_of(" \t\r\n"));
      return s;
    };
    if (strip(line) != "t,x,w") throw DegenerateField("field file must start with header 't,x,w'");
    std::vector<ForcingPoint> pts;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      line = strip(line);
      if (line.empty()) continue;
      ForcingPoint p;
      char trailing;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &p.time, &p.position, &p.weight,
                      &trailing) != 3)
        throw DegenerateField("malformed field row at line " + std::to_string(lineno));
      pts.push_back(p);
    }
    return ForcingField(std::move(pts), t_min, t_max);
  }

  void serialize_csv(std::ostream& out) const {
    out << "t,x,w\n";
    char buf[128];
    for (const auto& p : points_) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.time, p.position, p.weight);
      out << buf;
    }
  }

  // Largest s <= before - M whose atom is alone in [s-M,s+M] x T and heavy
  // enough (weight strictly above 1/(4M)).
  std::optional<SmallNoiseZone> find_small_noise_zone(double M, double before) const {
    if (!(M > 0.0)) throw Error("zone half-width M must be positive");
    const double threshold = 1.0 / (4.0 * M);
    std::size_t i = first_after(before - M);
    while (i > 0) {
      --i;
      const auto& p = points_[i];
      if (!(p.weight > threshold)) continue;
      if (p.time - M < t_min_) continue;  // aloneness not certifiable past the window edge
      bool alone = true;
      if (i > 0 && p.time - points_[i - 1].time <= M) alone = false;
      if (i + 1 < points_.size() && points_[i + 1].time - p.time <= M) alone = false;
      if (!alone) continue;
      return SmallNoiseZone{p.time, p.position, p.weight, M};
    }
    return std::nullopt;
  }

  RegenerationPoint regeneration_point(double t, double M) const {
    auto zone = find_small_noise_zone(M, t);
    if (!zone)
      throw NoRegeneration("window too short: no small-noise zone at or before t = " +
                           std::to_string(t));
    return RegenerationPoint{zone->s, zone->y, zone->M};
  }

 private:
  std::vector<ForcingPoint> points_;
  double t_min_, t_max_;
};

}  // namespace burgers
