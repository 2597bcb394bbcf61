#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sine_thurston/center_result.hpp"
#include "sine_thurston/combinatorics.hpp"
#include "sine_thurston/oracle.hpp"

namespace sine_thurston {

inline constexpr double kLambdaFloor = 1e-8;
inline constexpr double kSeparationFloor = 1e-10;

/// Images z_1 .. z_{m-1} of the marked cycle points x_1 .. x_{m-1}. The anchor
/// x0 is fixed by every pullback and is not stored per step.
class MarkedConfig {
 public:
  MarkedConfig(double anchor, std::vector<Complex> points);

  double anchor() const { return anchor_; }
  /// points()[l - 1] is z_l.
  const std::vector<Complex>& points() const { return points_; }
  /// z_{m-1}, or the anchor when m = 1.
  Complex lambda() const {
    return points_.empty() ? Complex(anchor_, 0.0) : points_.back();
  }
  /// z_l for l in [0, m-1], with z_0 = x0.
  Complex point(std::size_t l) const {
    return l == 0 ? Complex(anchor_, 0.0) : points_[l - 1];
  }

 private:
  double anchor_;
  std::vector<Complex> points_;
};

/// Raised when the iteration leaves the region where the pullback is defined
/// (lambda below the floor, non-finite arguments, collapsing marked points).
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedPolicy {
  enum class Kind { kDefault, kRandom };
  Kind kind = Kind::kDefault;
  std::uint64_t seed_value = 0;

  static SeedPolicy standard() { return {}; }
  static SeedPolicy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
};

struct TraceStep {
  int n = 0;
  Complex lambda;
  /// Largest chordal move of a marked point during step n (0 for the seed row).
  double displacement = 0.0;
  double separation = 0.0;
  /// displacement_n / displacement_{n-1}; absent for n <= 1 or a zero denominator.
  std::optional<double> ratio;
};

struct IterationTrace {
  std::vector<TraceStep> steps;
};

struct SpiderOptions {
  double tol = 1e-12;
  int max_iter = 200;
  SeedPolicy seed;
};

enum class SpiderStatus { kConverged, kDiverged, kDegenerate, kUncertified };

const char* to_string(SpiderStatus status);

struct SpiderRun {
  SpiderStatus status = SpiderStatus::kDiverged;
  CenterResult result;
  IterationTrace trace;
  /// Present once the displacement fell below tol.
  std::optional<Certificate> certificate;
  std::string message;
};

/// z_l = x0 + l (0.4 + 0.3i); the random policy adds a uniform point of the
/// radius-0.5 disk to each, resampling (at most 100 times) invalid draws.
MarkedConfig initial_configuration(const Itinerary& it, const SeedPolicy& seed);

/// One pullback: z'_{l+1} = addressed_arcsin(z_l / lambda, a_{l+1}), z_0 = x0.
/// Throws DegenerateConfiguration when |lambda| < 1e-8 or an argument is non-finite.
MarkedConfig pullback_step(const MarkedConfig& config, const Itinerary& it);

/// max_l |lambda sin(z_{l+1 mod m}) - z_l| with z_0 = x0.
double residual(const MarkedConfig& config, const Itinerary& it);

/// Largest chordal distance between corresponding points of two configurations.
double displacement(const MarkedConfig& before, const MarkedConfig& after);

/// Iterates pullback_step from the seed until the displacement drops below tol,
/// then certifies the limit. Degenerate and divergent runs keep their partial trace.
SpiderRun run_spider(const Itinerary& it, const SpiderOptions& opts = {});

/// CSV with header `n,re_lambda,im_lambda,displacement,separation,ratio`.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

}  // namespace sine_thurston
