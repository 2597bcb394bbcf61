#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sine_thurston/spider.hpp"

namespace sine_thurston {

/// Orbit points closer than this (chordally) are treated as one point by separation().
inline constexpr double kDuplicateTolerance = 1e-9;
/// Lower bound on |lambda_n| below which a run is flagged.
inline constexpr double kLambdaAlarm = 1e-6;

struct ProxyLength {
  int step = 0;
  int partition = 0;
  double value = 0.0;
};

struct GeometryReport {
  double min_lambda = 0.0;
  double max_lambda = 0.0;
  double min_separation = 0.0;
  std::optional<double> rate_estimate;
  std::vector<ProxyLength> proxy_lengths;
};

/// Smallest chordal distance between distinct points of
/// {+-x0, +-z_1, ..., +-z_{m-1}, 0, pi, inf}. Mirror images come from the odd
/// symmetry of the normalizing maps; orbit points within kDuplicateTolerance of
/// each other count as one point.
double separation(const MarkedConfig& config);

struct LambdaBounds {
  double min = 0.0;
  double max = 0.0;
  bool alarm() const { return min < kLambdaAlarm; }
};

/// min_n |lambda_n| and max_n |lambda_n|. Throws std::invalid_argument on an empty trace.
LambdaBounds lambda_bounds(const IterationTrace& trace);

/// Geometric mean of the last ceil(k/2) of the k consecutive displacement ratios.
/// Needs at least five steps with positive displacement (std::invalid_argument otherwise).
double contraction_estimate(const IterationTrace& trace);

/// Normalizes by a Mobius map taking first = {p1, p2} to {0, x} and second = {q1, q2}
/// to {1, inf}; returns max(0, log(1/|x|) / 2pi). Throws std::invalid_argument when two
/// of the four points coincide.
double annulus_length_proxy(const std::array<ExtendedPoint, 2>& first,
                            const std::array<ExtendedPoint, 2>& second);

/// Index of the first step past the burn-in (the first 20% of steps).
std::size_t burn_in_index(const IterationTrace& trace);

/// Aggregates bounds, separation and rate over a run. Partition 0 of the proxy is
/// ({0, lambda_n}, {pi, inf}).
GeometryReport geometry_report(const IterationTrace& trace);

void write_report_table(std::ostream& out, const GeometryReport& report);
/// `metric,value` rows.
void write_report_csv(std::ostream& out, const GeometryReport& report);

}  // namespace sine_thurston
