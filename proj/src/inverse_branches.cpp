#include "sine_thurston/inverse_branches.hpp"

#include <cmath>
#include <stdexcept>

namespace sine_thurston {

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

ExtendedPoint::ExtendedPoint(Complex value) : value_(value) {
  if (!is_finite(value)) {
    throw std::invalid_argument("ExtendedPoint: non-finite value");
  }
}

Complex principal_arcsin(Complex w) {
  if (!is_finite(w)) {
    throw std::invalid_argument("principal_arcsin: non-finite argument");
  }
  // std::asin picks the side of a cut from the sign of a zero imaginary part.
  // Pin it so that real input lands where -i log(iw + sqrt(1 - w^2)) puts it:
  // the lower side of [1, inf) and the upper side of (-inf, -1].
  if (w.imag() == 0.0) w = Complex(w.real(), w.real() > 0.0 ? -0.0 : 0.0);
  return std::asin(w);
}

Complex addressed_arcsin(Complex w, long address) {
  const Complex base = principal_arcsin(w);
  const double sign = (address % 2 == 0) ? 1.0 : -1.0;
  return sign * base + Complex(static_cast<double>(address) * kPi, 0.0);
}

double chordal_distance(const ExtendedPoint& p, const ExtendedPoint& q) {
  if (p.is_infinite() && q.is_infinite()) return 0.0;
  if (p.is_infinite() || q.is_infinite()) {
    const Complex z = p.is_infinite() ? q.value() : p.value();
    return 2.0 / std::hypot(1.0, std::abs(z));
  }
  const Complex a = p.value();
  const Complex b = q.value();
  return 2.0 * std::abs(a - b) / (std::hypot(1.0, std::abs(a)) * std::hypot(1.0, std::abs(b)));
}

long strip_index(Complex z) { return std::lround(z.real() / kPi); }

double strip_boundary_gap(Complex z) {
  const double offset = z.real() - static_cast<double>(strip_index(z)) * kPi;
  return kHalfPi - std::abs(offset);
}

}  // namespace sine_thurston
