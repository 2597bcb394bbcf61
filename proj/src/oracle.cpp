#include "sine_thurston/oracle.hpp"

#include <cmath>
#include <limits>

#include "sine_thurston/format.hpp"

namespace sine_thurston {
namespace {

constexpr double kEscapeImag = 700.0;
constexpr double kClosureTolerance = 1e-9;
constexpr double kSubPeriodTolerance = 1e-6;
constexpr double kMultiplierTolerance = 1e-8;
constexpr double kBoundaryTolerance = 1e-9;

constexpr double kNewtonTarget = 1e-13;
constexpr double kNewtonFloor = 1e-10;
constexpr int kNewtonMaxSteps = 50;
constexpr int kMaxHalvings = 20;
constexpr double kDerivativeFloor = 1e-14;

double anchor_of(long k0) { return kHalfPi + static_cast<double>(k0) * kPi; }

}  // namespace

OrbitTrace forward_orbit(Complex lambda, int period, long k0) {
  if (lambda == Complex(0.0) || !is_finite(lambda)) {
    throw std::invalid_argument("forward_orbit: lambda must be finite and nonzero");
  }
  if (period < 1) throw std::invalid_argument("forward_orbit: period must be >= 1");

  OrbitTrace trace;
  trace.lambda = lambda;
  const Complex x0(anchor_of(k0), 0.0);
  trace.points.reserve(static_cast<std::size_t>(period) + 1);
  trace.points.push_back(x0);
  double multiplier = 1.0;
  for (int j = 0; j < period; ++j) {
    const Complex z = trace.points.back();
    if (std::abs(z.imag()) > kEscapeImag) {
      trace.escaped = true;
      trace.escape_step = j;
      trace.closure_error = std::numeric_limits<double>::infinity();
      trace.cycle_multiplier_bound = std::numeric_limits<double>::infinity();
      return trace;
    }
    multiplier *= std::abs(lambda * std::cos(z));
    trace.points.push_back(lambda * std::sin(z));
  }
  trace.closure_error = std::abs(trace.points.back() - x0);
  trace.cycle_multiplier_bound = multiplier;
  return trace;
}

ClosureValue closure_function(Complex lambda, int period, long k0) {
  const Complex x0(anchor_of(k0), 0.0);
  Complex z = x0;
  Complex dz(0.0, 0.0);
  for (int j = 0; j < period; ++j) {
    const Complex s = std::sin(z);
    dz = s + lambda * std::cos(z) * dz;
    z = lambda * s;
  }
  return {z - x0, dz};
}

NewtonSolution newton_closure(Complex lambda0, int period, long k0) {
  if (lambda0 == Complex(0.0) || !is_finite(lambda0)) {
    throw std::invalid_argument("newton_closure: lambda0 must be finite and nonzero");
  }
  NewtonSolution sol;
  sol.lambda = lambda0;
  ClosureValue f = closure_function(lambda0, period, k0);
  if (!is_finite(f.value)) throw NewtonFailure("Newton: closure overflow at the seed");
  double norm = std::abs(f.value);

  for (int step = 0; step < kNewtonMaxSteps && norm >= kNewtonTarget; ++step) {
    if (!(std::abs(f.derivative) >= kDerivativeFloor)) {
      throw NewtonFailure("Newton: derivative underflow");
    }
    const Complex full = -f.value / f.derivative;
    Complex delta = full;
    bool improved = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      const Complex trial = sol.lambda + delta;
      if (trial != Complex(0.0)) {
        const ClosureValue ft = closure_function(trial, period, k0);
        const double nt = std::abs(ft.value);
        if (is_finite(ft.value) && nt < norm) {
          sol.lambda = trial;
          sol.last_step = std::abs(delta);
          f = ft;
          norm = nt;
          improved = true;
          break;
        }
      }
      delta *= 0.5;
    }
    sol.steps = step + 1;
    if (!improved) {
      if (norm < kNewtonFloor) break;
      throw NewtonFailure("Newton: no damped step decreases |F|");
    }
  }
  if (!(norm < kNewtonFloor)) throw NewtonFailure("Newton: no convergence within the step budget");
  sol.residual = norm;
  return sol;
}

Certificate certify_center(Complex lambda, const Itinerary& it) {
  const int m = it.period();
  Certificate cert;
  cert.expected_period = m;
  cert.closure = {"closure", false, std::numeric_limits<double>::infinity(), kClosureTolerance};
  cert.exact_period = {"exact period", false, 0.0, static_cast<double>(m)};
  cert.addresses = {"address match", false, 0.0, 0.0};
  cert.multiplier = {"multiplier", false, std::numeric_limits<double>::infinity(),
                     kMultiplierTolerance};
  if (lambda == Complex(0.0) || !is_finite(lambda)) return cert;

  const OrbitTrace orbit = forward_orbit(lambda, m, it.k0());
  if (orbit.escaped) return cert;

  const Complex x0 = orbit.points.front();
  cert.closure.measured = orbit.closure_error;
  cert.closure.pass = orbit.closure_error < kClosureTolerance;

  cert.measured_period = m;
  for (int d = 1; d < m; ++d) {
    if (m % d == 0 && std::abs(orbit.points[static_cast<std::size_t>(d)] - x0) < kSubPeriodTolerance) {
      cert.measured_period = d;
      break;
    }
  }
  cert.exact_period.measured = cert.measured_period;
  cert.exact_period.pass = cert.measured_period == m;

  // Label x_l is the forward point z_{m-l}.
  std::size_t mismatches = 0;
  for (int l = 1; l < m; ++l) {
    const Complex point = orbit.points[static_cast<std::size_t>(m - l)];
    cert.observed_addresses.push_back(strip_index(point));
    if (strip_boundary_gap(point) < kBoundaryTolerance ||
        cert.observed_addresses.back() != it.addresses()[static_cast<std::size_t>(l - 1)]) {
      ++mismatches;
    }
  }
  cert.addresses.measured = static_cast<double>(mismatches);
  cert.addresses.pass = mismatches == 0;

  cert.multiplier.measured = orbit.cycle_multiplier_bound;
  cert.multiplier.pass = orbit.cycle_multiplier_bound < kMultiplierTolerance;
  return cert;
}

CenterResult center_from_certificate(Complex lambda, const Certificate& cert) {
  CenterResult r;
  r.lambda_star = lambda;
  r.orbit_residual = cert.closure.measured;
  const bool closes = cert.closure.pass || cert.measured_period < cert.expected_period;
  r.exact_period = closes ? cert.measured_period : 0;
  r.converged = cert.all_pass();
  return r;
}

CenterResult newton_refine(Complex lambda0, const Itinerary& it) {
  const NewtonSolution sol = newton_closure(lambda0, it.period(), it.k0());
  CenterResult r = center_from_certificate(sol.lambda, certify_center(sol.lambda, it));
  r.iterations = sol.steps;
  r.final_displacement = sol.last_step;
  return r;
}

std::string certificate_report(const Certificate& cert) {
  std::string out;
  auto line = [&out](const char* tag, const CertificateClause& c) {
    out += std::string(tag) + " " + c.name + ": " + (c.pass ? "PASS" : "FAIL") +
           " measured=" + format_real(c.measured) + " threshold=" + format_real(c.threshold) + "\n";
  };
  line("(a)", cert.closure);
  line("(b)", cert.exact_period);
  line("(c)", cert.addresses);
  line("(d)", cert.multiplier);
  out += std::string("certified: ") + (cert.all_pass() ? "yes" : "no") + "\n";
  return out;
}

}  // namespace sine_thurston
