#include "sine_thurston/format.hpp"

#include <cmath>
#include <cstdio>

namespace sine_thurston {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  const double im = z.imag();
  const bool negative = std::signbit(im) && im != 0.0;
  return format_real(z.real()) + (negative ? " - " : " + ") + format_real(std::abs(im)) + "i";
}

}  // namespace sine_thurston
