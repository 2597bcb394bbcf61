#pragma once

#include <optional>

#include "sine_thurston/inverse_branches.hpp"

namespace sine_thurston {

/// Outcome of locating a center, by either the pullback iteration or Newton's method.
struct CenterResult {
  Complex lambda_star{0.0, 0.0};
  int iterations = 0;
  /// Last chordal step of the marked points (spider) or last |delta lambda| (Newton).
  double final_displacement = 0.0;
  /// |G^m(x0) - x0| at lambda_star.
  double orbit_residual = 0.0;
  /// Smallest d | m with closure at d, or 0 when the orbit does not close.
  int exact_period = 0;
  /// Empirical contraction rate; absent when it cannot be estimated.
  std::optional<double> contraction_rate;
  /// True only when every certificate clause passed.
  bool converged = false;
};

}  // namespace sine_thurston
