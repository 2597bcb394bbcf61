#pragma once

#include <string>

#include "sine_thurston/inverse_branches.hpp"

namespace sine_thurston {

/// %.17g, which round-trips every double.
std::string format_real(double x);

/// `a + bi` / `a - bi` at 17 significant digits.
std::string format_complex(Complex z);

}  // namespace sine_thurston
