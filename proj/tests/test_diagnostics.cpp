#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sine_thurston/diagnostics.hpp"

using namespace sine_thurston;

namespace {

Itinerary make(long m, long k0, std::vector<long> a) {
  return validate_itinerary({m, k0, std::move(a), std::nullopt});
}

IterationTrace geometric_trace(double first, double ratio, int steps) {
  IterationTrace trace;
  trace.steps.push_back({0, Complex(1.0, 0.0), 0.0, 0.5, std::nullopt});
  double d = first;
  for (int n = 1; n <= steps; ++n) {
    trace.steps.push_back({n, Complex(1.0, 0.0), d, 0.5, std::nullopt});
    d *= ratio;
  }
  return trace;
}

ExtendedPoint mobius(Complex a, Complex b, Complex c, Complex d, const ExtendedPoint& z) {
  if (z.is_infinite()) return ExtendedPoint(a / c);
  return ExtendedPoint((a * z.value() + b) / (c * z.value() + d));
}

}  // namespace

TEST_CASE("separation examples") {
  CHECK(separation(MarkedConfig(kHalfPi, {})) == doctest::Approx(0.5117300991624728).epsilon(1e-14));
  CHECK(separation(MarkedConfig(kHalfPi, {Complex(0.0, 0.0)})) == 0.0);
  const double root = oracles::bisect_period_two_root();
  CHECK(separation(MarkedConfig(kHalfPi, {root})) > 0.1);
}

TEST_CASE("separation is permutation and mirror invariant (property)") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Complex> points;
    const int count = 1 + trial % 5;
    for (int i = 0; i < count; ++i) points.push_back(oracles::random_in_disk(rng, 6.0));
    const double x0 = kHalfPi + 2.0 * kPi * static_cast<double>(trial % 3);
    const double base = separation(MarkedConfig(x0, points));

    std::vector<Complex> shuffled = points;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(separation(MarkedConfig(x0, shuffled)) == base);

    std::vector<Complex> mirrored;
    for (const Complex& z : points) mirrored.push_back(-z);
    CHECK(separation(MarkedConfig(-x0, mirrored)) == base);
  }
}

TEST_CASE("separation treats a self-symmetric cycle as one set of points") {
  // z1 = -x0 duplicates the mirror of the anchor.
  const double with_duplicate = separation(MarkedConfig(kHalfPi, {Complex(-kHalfPi, 0.0)}));
  CHECK(with_duplicate == doctest::Approx(separation(MarkedConfig(kHalfPi, {}))));
  CHECK(with_duplicate > 0.0);
}

TEST_CASE("lambda_bounds examples") {
  const SpiderRun one = run_spider(make(1, 0, {}));
  const LambdaBounds fixed = lambda_bounds(one.trace);
  CHECK(fixed.min == doctest::Approx(kHalfPi));
  CHECK(fixed.max == doctest::Approx(kHalfPi));
  CHECK_FALSE(fixed.alarm());

  // z <- pi - arcsin(pi / (2 z)) from z = 2.0.
  const Itinerary two = make(2, 0, {1});
  IterationTrace trace;
  MarkedConfig config(kHalfPi, {2.0});
  for (int n = 0; n <= 60; ++n) {
    trace.steps.push_back({n, config.lambda(), 0.0, separation(config), std::nullopt});
    config = pullback_step(config, two);
  }
  const LambdaBounds b = lambda_bounds(trace);
  CHECK(b.min >= 1.9);
  CHECK(b.max <= 2.5);
  CHECK(std::abs(trace.steps[1].lambda - 2.2382535428232804) < 1e-14);

  IterationTrace degenerate;
  degenerate.steps.push_back({0, Complex(1.0, 0.0), 0.0, 0.5, std::nullopt});
  degenerate.steps.push_back({1, Complex(3e-7, 1e-7), 0.1, 0.5, std::nullopt});
  CHECK(lambda_bounds(degenerate).alarm());
  CHECK_THROWS_AS(lambda_bounds(IterationTrace{}), std::invalid_argument);
}

TEST_CASE("contraction_estimate examples") {
  CHECK(contraction_estimate(geometric_trace(1.0, 0.5, 8)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(contraction_estimate(run_spider(make(1, 0, {})).trace), std::invalid_argument);
  CHECK_THROWS_AS(contraction_estimate(geometric_trace(1.0, 0.5, 4)), std::invalid_argument);
  CHECK(contraction_estimate(run_spider(make(2, 0, {1})).trace) ==
        doctest::Approx(0.343522074106783).epsilon(0.05));
  CHECK(contraction_estimate(geometric_trace(1.0, 1.5, 6)) == doctest::Approx(1.5));
}

TEST_CASE("contraction_estimate uses the later half of the ratios") {
  // Ratios 0.9, 0.9, 0.9, 0.1, 0.1: the last ceil(5/2) = 3 are 0.9, 0.1, 0.1.
  IterationTrace trace;
  const double moves[] = {1.0, 0.9, 0.81, 0.729, 0.0729, 0.00729};
  trace.steps.push_back({0, Complex(1.0), 0.0, 0.5, std::nullopt});
  for (int n = 0; n < 6; ++n) trace.steps.push_back({n + 1, Complex(1.0), moves[n], 0.5, std::nullopt});
  CHECK(contraction_estimate(trace) == doctest::Approx(std::cbrt(0.9 * 0.1 * 0.1)).epsilon(1e-12));
}

TEST_CASE("annulus_length_proxy examples") {
  const ExtendedPoint inf = ExtendedPoint::infinity();
  CHECK(annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(0.01)}, {ExtendedPoint(kPi), inf}) ==
        doctest::Approx(0.9151250187173809).epsilon(1e-13));
  CHECK(annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(kPi * Complex(0.6, 0.8))},
                             {ExtendedPoint(kPi), inf}) == 0.0);
  CHECK(annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(5.0)}, {ExtendedPoint(kPi), inf}) == 0.0);
  const double small = annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(0.001)}, {ExtendedPoint(kPi), inf});
  const double large = annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(0.01)}, {ExtendedPoint(kPi), inf});
  CHECK(small - large == doctest::Approx(0.36646779943971387).epsilon(1e-12));
  CHECK_THROWS_AS(annulus_length_proxy({ExtendedPoint(0.0), ExtendedPoint(0.0)}, {ExtendedPoint(kPi), inf}),
                  std::invalid_argument);
  CHECK_THROWS_AS(annulus_length_proxy({ExtendedPoint(0.0), inf}, {ExtendedPoint(kPi), inf}),
                  std::invalid_argument);
}

TEST_CASE("annulus_length_proxy is Mobius invariant (property)") {
  std::mt19937_64 rng(17);
  const ExtendedPoint inf = ExtendedPoint::infinity();
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Complex a = oracles::random_in_disk(rng, 2.0), b = oracles::random_in_disk(rng, 2.0);
    const Complex c = oracles::random_in_disk(rng, 2.0), d = oracles::random_in_disk(rng, 2.0);
    if (std::abs(a * d - b * c) < 0.5) continue;
    std::array<ExtendedPoint, 2> first{ExtendedPoint(oracles::random_in_disk(rng, 0.3)),
                                       ExtendedPoint(oracles::random_in_disk(rng, 0.3))};
    std::array<ExtendedPoint, 2> second{ExtendedPoint(1.0 + oracles::random_in_disk(rng, 2.0)), inf};
    if (trial % 2 == 1) second[1] = ExtendedPoint(5.0 + oracles::random_in_disk(rng, 1.0));
    bool well_posed = true;
    std::array<ExtendedPoint, 4> all{first[0], first[1], second[0], second[1]};
    std::array<ExtendedPoint, 4> images{inf, inf, inf, inf};
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!all[i].is_infinite() && std::abs(c * all[i].value() + d) < 0.05) well_posed = false;
      if (well_posed) images[i] = mobius(a, b, c, d, all[i]);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if (chordal_distance(all[i], all[j]) < 1e-3) well_posed = false;
      }
    }
    if (!well_posed) continue;
    const double before = annulus_length_proxy(first, second);
    const double after = annulus_length_proxy({images[0], images[1]}, {images[2], images[3]});
    CHECK(std::abs(before - after) <= 1e-10);
    ++compared;
  }
  CHECK(compared > 300);
}

TEST_CASE("separation past burn-in stays above half its final value (property)") {
  for (int m = 1; m <= 4; ++m) {
    for (const Itinerary& it : enumerate_itineraries(m, 2)) {
      const SpiderRun run = run_spider(it);
      if (run.status != SpiderStatus::kConverged) continue;
      CAPTURE(format_itinerary(it));
      const auto& steps = run.trace.steps;
      const double final_separation = steps.back().separation;
      for (std::size_t n = burn_in_index(run.trace); n < steps.size(); ++n) {
        CHECK(steps[n].separation >= 0.5 * final_separation);
      }
      for (const TraceStep& s : steps) CHECK(s.separation > 0.0);
    }
  }
}

TEST_CASE("final separation of catalog runs is at least 1e-3 (property)") {
  for (int m = 1; m <= 4; ++m) {
    for (const Itinerary& it : enumerate_itineraries(m, 2)) {
      const SpiderRun run = run_spider(it);
      if (run.status != SpiderStatus::kConverged) continue;
      CAPTURE(format_itinerary(it));
      CHECK(run.trace.steps.back().separation >= 1e-3);
    }
  }
}

TEST_CASE("separation at a converged center agrees with its forward orbit") {
  // m=4, a=[2,1,2]: two orbit points sit 0.0076 apart near 6.53, far below 1e-3 chordally.
  const Itinerary it = make(4, 0, {2, 1, 2});
  const SpiderRun run = run_spider(it);
  REQUIRE(run.status == SpiderStatus::kConverged);
  const OrbitTrace orbit = forward_orbit(run.result.lambda_star, 4, 0);
  const double close_pair = chordal_distance(orbit.points[1], orbit.points[3]);
  CHECK(close_pair == doctest::Approx(3.4955e-4).epsilon(1e-3));
  CHECK(run.trace.steps.back().separation == doctest::Approx(close_pair).epsilon(1e-6));
}

TEST_CASE("burn-in index") {
  CHECK(burn_in_index(geometric_trace(1.0, 0.5, 9)) == 2);
  CHECK(burn_in_index(geometric_trace(1.0, 0.5, 10)) == 3);
  CHECK(burn_in_index(IterationTrace{}) == 0);
}

TEST_CASE("geometry report and its exports") {
  const SpiderRun run = run_spider(make(2, 0, {1}));
  const GeometryReport report = geometry_report(run.trace);
  CHECK(report.min_lambda <= report.max_lambda);
  CHECK(report.min_separation > 0.1);
  REQUIRE(report.rate_estimate.has_value());
  CHECK(*report.rate_estimate < 1.0);
  CHECK(report.proxy_lengths.size() == run.trace.steps.size());

  GeometryReport manual;
  manual.min_lambda = 0.5;
  manual.max_lambda = 2.0;
  manual.min_separation = 0.25;
  manual.proxy_lengths.push_back({3, 0, 0.125});
  std::ostringstream csv;
  write_report_csv(csv, manual);
  CHECK(csv.str() ==
        "metric,value\n"
        "min_lambda,0.5\n"
        "max_lambda,2\n"
        "min_separation,0.25\n"
        "rate_estimate,\n"
        "proxy_length[3][0],0.125\n");

  manual.min_lambda = 1e-7;
  std::ostringstream table;
  write_report_table(table, manual);
  CHECK(table.str().find("ALARM") != std::string::npos);
  CHECK(table.str().find("contraction rate   n/a") != std::string::npos);
}
