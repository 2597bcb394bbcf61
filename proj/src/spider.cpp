#include "sine_thurston/spider.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sine_thurston/diagnostics.hpp"
#include "sine_thurston/format.hpp"

namespace sine_thurston {
namespace {

constexpr int kMaxSeedAttempts = 100;
constexpr double kSeedRadius = 0.5;
const Complex kSeedStep(0.4, 0.3);
constexpr int kMaxPolishSteps = 30;

double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool satisfies_invariants(const MarkedConfig& config) {
  return std::abs(config.lambda()) >= kLambdaFloor && separation(config) >= kSeparationFloor;
}

// Continues the iteration past the stopping point, unrecorded, while the
// displacement still shrinks. The chordal stopping rule leaves Euclidean error
// of order tol (1 + |lambda|^2) / 2, which matters for |lambda| of a few pi.
MarkedConfig polish(MarkedConfig config, const Itinerary& it, double last_move) {
  for (int extra = 0; extra < kMaxPolishSteps && last_move > 0.0; ++extra) {
    MarkedConfig next = pullback_step(config, it);
    const double move = displacement(config, next);
    if (!(move < last_move)) break;
    config = std::move(next);
    last_move = move;
  }
  return config;
}

}  // namespace

MarkedConfig::MarkedConfig(double anchor, std::vector<Complex> points)
    : anchor_(anchor), points_(std::move(points)) {}

const char* to_string(SpiderStatus status) {
  switch (status) {
    case SpiderStatus::kConverged: return "converged";
    case SpiderStatus::kDiverged: return "diverged";
    case SpiderStatus::kDegenerate: return "degenerate";
    case SpiderStatus::kUncertified: return "uncertified";
  }
  return "unknown";
}

MarkedConfig initial_configuration(const Itinerary& it, const SeedPolicy& seed) {
  const double x0 = it.anchor();
  std::vector<Complex> points;
  for (int l = 1; l < it.period(); ++l) {
    points.push_back(x0 + static_cast<double>(l) * kSeedStep);
  }
  MarkedConfig standard(x0, points);
  if (seed.kind == SeedPolicy::Kind::kDefault || points.empty()) return standard;

  std::mt19937_64 rng(seed.seed_value);
  for (int attempt = 0; attempt < kMaxSeedAttempts; ++attempt) {
    std::vector<Complex> perturbed = points;
    for (auto& z : perturbed) {
      const double radius = kSeedRadius * std::sqrt(canonical(rng));
      const double angle = 2.0 * kPi * canonical(rng);
      z += std::polar(radius, angle);
    }
    MarkedConfig candidate(x0, std::move(perturbed));
    if (satisfies_invariants(candidate)) return candidate;
  }
  return standard;
}

MarkedConfig pullback_step(const MarkedConfig& config, const Itinerary& it) {
  const Complex lambda = config.lambda();
  if (!(std::abs(lambda) >= kLambdaFloor)) {
    throw DegenerateConfiguration("lambda below floor: |lambda| = " + format_real(std::abs(lambda)));
  }
  const auto& addresses = it.addresses();
  std::vector<Complex> next;
  next.reserve(addresses.size());
  for (std::size_t l = 0; l < addresses.size(); ++l) {
    const Complex w = config.point(l) / lambda;
    if (!is_finite(w)) throw DegenerateConfiguration("non-finite pullback argument");
    next.push_back(addressed_arcsin(w, addresses[l]));
  }
  return MarkedConfig(config.anchor(), std::move(next));
}

double residual(const MarkedConfig& config, const Itinerary& it) {
  const auto m = static_cast<std::size_t>(it.period());
  const Complex lambda = config.lambda();
  double worst = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    const Complex image = lambda * std::sin(config.point((l + 1) % m));
    worst = std::max(worst, std::abs(image - config.point(l)));
  }
  return worst;
}

double displacement(const MarkedConfig& before, const MarkedConfig& after) {
  double worst = 0.0;
  const auto count = std::min(before.points().size(), after.points().size());
  for (std::size_t i = 0; i < count; ++i) {
    worst = std::max(worst, chordal_distance(before.points()[i], after.points()[i]));
  }
  return worst;
}

SpiderRun run_spider(const Itinerary& it, const SpiderOptions& opts) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1) {
    throw std::invalid_argument("run_spider: need tol > 0 and max_iter >= 1");
  }
  SpiderRun run;
  MarkedConfig config = initial_configuration(it, opts.seed);
  run.trace.steps.push_back({0, config.lambda(), 0.0, separation(config), std::nullopt});

  double last_move = 0.0;
  for (int n = 1; n <= opts.max_iter; ++n) {
    MarkedConfig next = config;
    try {
      next = pullback_step(config, it);
    } catch (const DegenerateConfiguration& e) {
      run.status = SpiderStatus::kDegenerate;
      run.message = e.what();
      run.result.lambda_star = config.lambda();
      run.result.iterations = n - 1;
      return run;
    }
    const double move = displacement(config, next);
    const double sep = separation(next);
    TraceStep step{n, next.lambda(), move, sep, std::nullopt};
    if (n >= 2 && last_move > 0.0) step.ratio = move / last_move;
    run.trace.steps.push_back(step);
    last_move = move;
    config = std::move(next);

    run.result.lambda_star = config.lambda();
    run.result.iterations = n;
    run.result.final_displacement = move;

    if (!(sep >= kSeparationFloor)) {
      run.status = SpiderStatus::kDegenerate;
      run.message = "marked points collapsed: separation " + format_real(sep);
      return run;
    }
    if (move < opts.tol) {
      config = polish(std::move(config), it, move);
      const Certificate cert = certify_center(config.lambda(), it);
      CenterResult result = center_from_certificate(config.lambda(), cert);
      result.iterations = n;
      result.final_displacement = move;
      try {
        result.contraction_rate = contraction_estimate(run.trace);
      } catch (const std::invalid_argument&) {
        result.contraction_rate.reset();
      }
      run.result = result;
      run.certificate = cert;
      run.status = cert.all_pass() ? SpiderStatus::kConverged : SpiderStatus::kUncertified;
      if (!cert.all_pass()) run.message = "limit failed certification";
      return run;
    }
  }
  run.status = SpiderStatus::kDiverged;
  run.message = "iteration budget exhausted, displacement " + format_real(last_move);
  return run;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "n,re_lambda,im_lambda,displacement,separation,ratio\n";
  for (const auto& s : trace.steps) {
    out << s.n << ',' << format_real(s.lambda.real()) << ',' << format_real(s.lambda.imag()) << ','
        << format_real(s.displacement) << ',' << format_real(s.separation) << ',';
    if (s.ratio) out << format_real(*s.ratio);
    out << '\n';
  }
}

}  // namespace sine_thurston
