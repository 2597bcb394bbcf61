#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sine_thurston/center_result.hpp"
#include "sine_thurston/combinatorics.hpp"

namespace sine_thurston {

/// Forward critical orbit x0, G(x0), ..., G^m(x0) of G(z) = lambda sin z.
struct OrbitTrace {
  Complex lambda{0.0, 0.0};
  std::vector<Complex> points;
  double closure_error = 0.0;
  /// |prod_{j<m} lambda cos(z_j)|
  double cycle_multiplier_bound = 0.0;
  /// Set when |Im z| exceeded 700 before m steps; points then stop early.
  bool escaped = false;
  int escape_step = 0;
};

OrbitTrace forward_orbit(Complex lambda, int period, long k0);

/// F(lambda) = G_lambda^m(x0) - x0 together with dF/dlambda (forward mode).
struct ClosureValue {
  Complex value;
  Complex derivative;
};

ClosureValue closure_function(Complex lambda, int period, long k0);

class NewtonFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NewtonSolution {
  Complex lambda;
  int steps = 0;
  double last_step = 0.0;
  double residual = 0.0;
};

/// Damped Newton on F(lambda) = 0 for the closure of x0 = pi/2 + k0 pi after m steps.
/// Stops when |F| < 1e-13, or at the rounding floor (no damped step lowers |F| and
/// |F| < 1e-10). Throws NewtonFailure on divergence or |dF/dlambda| < 1e-14.
NewtonSolution newton_closure(Complex lambda0, int period, long k0);

struct CertificateClause {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

/// Center certificate: (a) closure, (b) exact period, (c) address match,
/// (d) cycle multiplier.
struct Certificate {
  CertificateClause closure;
  CertificateClause exact_period;
  CertificateClause addresses;
  CertificateClause multiplier;
  int expected_period = 0;
  /// Smallest proper divisor of m at which the orbit closes, else m.
  int measured_period = 0;
  std::vector<long> observed_addresses;

  bool all_pass() const {
    return closure.pass && exact_period.pass && addresses.pass && multiplier.pass;
  }
};

Certificate certify_center(Complex lambda, const Itinerary& it);

/// Newton from lambda0 on the itinerary's closure equation, then certification.
CenterResult newton_refine(Complex lambda0, const Itinerary& it);

/// Builds a CenterResult skeleton (lambda, residual, exact period, converged) from a certificate.
CenterResult center_from_certificate(Complex lambda, const Certificate& cert);

/// One clause per line: `(a) closure: PASS measured=... threshold=...`.
std::string certificate_report(const Certificate& cert);

}  // namespace sine_thurston
