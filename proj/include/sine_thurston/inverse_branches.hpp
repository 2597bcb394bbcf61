#pragma once

#include <complex>
#include <optional>

namespace sine_thurston {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// A point of the Riemann sphere: a finite complex value or infinity.
class ExtendedPoint {
 public:
  /// Throws std::invalid_argument for non-finite components.
  ExtendedPoint(Complex value);  // NOLINT(google-explicit-constructor)
  ExtendedPoint(double value) : ExtendedPoint(Complex(value, 0.0)) {}  // NOLINT

  static ExtendedPoint infinity() { return ExtendedPoint(); }

  bool is_infinite() const { return !value_.has_value(); }
  /// Precondition: !is_infinite().
  Complex value() const { return *value_; }

  friend bool operator==(const ExtendedPoint& a, const ExtendedPoint& b) {
    return a.value_ == b.value_;
  }

 private:
  ExtendedPoint() = default;
  std::optional<Complex> value_;
};

/// Principal arcsine, real part in [-pi/2, pi/2].
///
/// On the real cuts the value is the one given by -i log(iw + sqrt(1 - w^2))
/// with a +0 imaginary part: continuous from above on (-inf, -1] and from below
/// on [1, inf), so asin(2) = pi/2 - 1.3169...i.
Complex principal_arcsin(Complex w);

/// Inverse branch of sin on the strip |Re z - a pi| <= pi/2:
/// (-1)^a asin(w) + a pi.
Complex addressed_arcsin(Complex w, long address);

/// Chordal metric on the Riemann sphere, 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)).
double chordal_distance(const ExtendedPoint& p, const ExtendedPoint& q);

/// Strip index a with |Re z - a pi| <= pi/2 (nearest multiple of pi).
long strip_index(Complex z);

/// Distance from Re z to the nearer boundary of its strip.
double strip_boundary_gap(Complex z);

bool is_finite(Complex z);

}  // namespace sine_thurston
