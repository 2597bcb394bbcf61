#include "sine_thurston/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sine_thurston/format.hpp"

namespace sine_thurston {

double separation(const MarkedConfig& config) {
  std::vector<Complex> orbit;
  orbit.reserve(2 * (config.points().size() + 1));
  for (std::size_t l = 0; l <= config.points().size(); ++l) {
    const Complex z = config.point(l);
    orbit.push_back(z);
    orbit.push_back(-z);
  }
  const std::array<ExtendedPoint, 3> marks{ExtendedPoint(0.0), ExtendedPoint(kPi),
                                           ExtendedPoint::infinity()};

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < marks.size(); ++i) {
    for (std::size_t j = i + 1; j < marks.size(); ++j) {
      best = std::min(best, chordal_distance(marks[i], marks[j]));
    }
  }
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (!is_finite(orbit[i])) return 0.0;
    for (const auto& mark : marks) best = std::min(best, chordal_distance(orbit[i], mark));
    for (std::size_t j = i + 1; j < orbit.size(); ++j) {
      const double d = chordal_distance(orbit[i], orbit[j]);
      if (d >= kDuplicateTolerance) best = std::min(best, d);
    }
  }
  return best;
}

LambdaBounds lambda_bounds(const IterationTrace& trace) {
  if (trace.steps.empty()) throw std::invalid_argument("lambda_bounds: empty trace");
  LambdaBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& s : trace.steps) {
    const double r = std::abs(s.lambda);
    b.min = std::min(b.min, r);
    b.max = std::max(b.max, r);
  }
  return b;
}

double contraction_estimate(const IterationTrace& trace) {
  std::vector<double> moves;
  for (const auto& s : trace.steps) {
    if (s.n >= 1 && s.displacement > 0.0) moves.push_back(s.displacement);
  }
  if (moves.size() < 5) {
    throw std::invalid_argument("contraction_estimate: fewer than 5 steps with positive displacement");
  }
  const std::size_t ratios = moves.size() - 1;
  const std::size_t take = (ratios + 1) / 2;
  double log_sum = 0.0;
  for (std::size_t i = moves.size() - take; i < moves.size(); ++i) {
    log_sum += std::log(moves[i] / moves[i - 1]);
  }
  return std::exp(log_sum / static_cast<double>(take));
}

double annulus_length_proxy(const std::array<ExtendedPoint, 2>& first,
                            const std::array<ExtendedPoint, 2>& second) {
  const std::array<ExtendedPoint, 4> pts{first[0], first[1], second[0], second[1]};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) throw std::invalid_argument("annulus_length_proxy: coincident points");
    }
  }
  // x = T(p2) for T(p1) = 0, T(q1) = 1, T(q2) = inf: the cross ratio
  // (p2 - p1)(q1 - q2) / ((p2 - q2)(q1 - p1)), with factors through inf dropped.
  const auto& [p1, p2] = first;
  const auto& [q1, q2] = second;
  Complex x;
  if (q2.is_infinite()) {
    x = (p2.value() - p1.value()) / (q1.value() - p1.value());
  } else if (p2.is_infinite()) {
    x = (q1.value() - q2.value()) / (q1.value() - p1.value());
  } else if (p1.is_infinite()) {
    x = (q1.value() - q2.value()) / (p2.value() - q2.value());
  } else if (q1.is_infinite()) {
    x = (p2.value() - p1.value()) / (p2.value() - q2.value());
  } else {
    x = (p2.value() - p1.value()) * (q1.value() - q2.value()) /
        ((p2.value() - q2.value()) * (q1.value() - p1.value()));
  }
  const double modulus = std::abs(x);
  if (!(modulus > 0.0)) throw std::invalid_argument("annulus_length_proxy: coincident points");
  return std::max(0.0, -std::log(modulus) / (2.0 * kPi));
}

std::size_t burn_in_index(const IterationTrace& trace) {
  return static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(trace.steps.size())));
}

GeometryReport geometry_report(const IterationTrace& trace) {
  GeometryReport report;
  const LambdaBounds bounds = lambda_bounds(trace);
  report.min_lambda = bounds.min;
  report.max_lambda = bounds.max;
  report.min_separation = std::numeric_limits<double>::infinity();
  for (const auto& s : trace.steps) {
    report.min_separation = std::min(report.min_separation, s.separation);
    if (s.lambda != Complex(0.0) && s.lambda != Complex(kPi)) {
      report.proxy_lengths.push_back(
          {s.n, 0,
           annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(s.lambda)},
                                {ExtendedPoint(kPi), ExtendedPoint::infinity()})});
    }
  }
  try {
    report.rate_estimate = contraction_estimate(trace);
  } catch (const std::invalid_argument&) {
    report.rate_estimate.reset();
  }
  return report;
}

void write_report_table(std::ostream& out, const GeometryReport& report) {
  out << "min |lambda_n|     " << format_real(report.min_lambda)
      << (report.min_lambda < kLambdaAlarm ? "  ALARM" : "") << '\n';
  out << "max |lambda_n|     " << format_real(report.max_lambda) << '\n';
  out << "min separation     " << format_real(report.min_separation) << '\n';
  out << "contraction rate   "
      << (report.rate_estimate ? format_real(*report.rate_estimate) : std::string("n/a")) << '\n';
  if (!report.proxy_lengths.empty()) {
    out << "final proxy length " << format_real(report.proxy_lengths.back().value) << '\n';
  }
}

void write_report_csv(std::ostream& out, const GeometryReport& report) {
  out << "metric,value\n";
  out << "min_lambda," << format_real(report.min_lambda) << '\n';
  out << "max_lambda," << format_real(report.max_lambda) << '\n';
  out << "min_separation," << format_real(report.min_separation) << '\n';
  out << "rate_estimate,";
  if (report.rate_estimate) out << format_real(*report.rate_estimate);
  out << '\n';
  for (const auto& p : report.proxy_lengths) {
    out << "proxy_length[" << p.step << "][" << p.partition << "]," << format_real(p.value) << '\n';
  }
}

}  // namespace sine_thurston
