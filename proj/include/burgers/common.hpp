#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace burgers {

// Relative tolerance for treating two action values as tied.
inline constexpr double kActionTieRel = 1e-9;
// Absolute tolerance for time coincidence (duplicate atoms, anchor lookup).
inline constexpr double kTimeTol = 1e-12;
// Tolerance for snapping a lifted displacement to an integer winding.
inline constexpr double kWindingSnapTol = 1e-6;

inline double action_tie_tol(double scale) {
  return kActionTieRel * std::max(1.0, std::fabs(scale));
}

// Wrap a real position to the fundamental domain [0,1).
inline double torus(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;  // guards x = -1e-17 style results
  return f;
}

// Signed distance on the circle, in (-1/2, 1/2].
inline double torus_gap(double a, double b) {
  double d = torus(a - b);
  return d > 0.5 ? d - 1.0 : d;
}

inline double torus_dist(double a, double b) { return std::fabs(torus_gap(a, b)); }

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyWindow : Error { using Error::Error; };
struct InvalidDistribution : Error { using Error::Error; };
struct DegenerateField : Error { using Error::Error; };
struct NoRegeneration : Error { using Error::Error; };
struct JunctionMismatch : Error { using Error::Error; };
struct WindingAnomaly : Error { using Error::Error; };
struct CountViolation : Error { using Error::Error; };
struct ZeroJump : Error { using Error::Error; };
struct LostShock : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct RangeTooWide : Error { using Error::Error; };

// splitmix64-seeded xorshift-free generator: we only need uniform doubles and
// exponentials that are bit-stable across standard libraries, so the sampling
// layer avoids std::*_distribution and builds everything from raw 64-bit draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // splitmix64 warmup so small seeds decorrelate
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Exponential with the given mean; strictly positive.
  double exponential(double mean) {
    double u;
    do { u = uniform01(); } while (u == 0.0);
    return -mean * std::log(u);
  }

 private:
  std::uint64_t state_;
};

}  // namespace burgers
