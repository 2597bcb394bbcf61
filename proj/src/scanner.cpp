#include "sine_thurston/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

#include "sine_thurston/format.hpp"
#include "sine_thurston/parallel.hpp"

namespace sine_thurston {
namespace {

constexpr double kReturnTolerance = 1e-9;
constexpr double kDedupTolerance = 1e-6;

Complex cycle_multiplier(Complex lambda, Complex z, int period) {
  Complex product(1.0, 0.0);
  for (int k = 0; k < period; ++k) {
    product *= lambda * std::cos(z);
    z = lambda * std::sin(z);
  }
  return product;
}

Complex iterate(Complex lambda, Complex z, int steps) {
  for (int k = 0; k < steps; ++k) z = lambda * std::sin(z);
  return z;
}

// A return after p steps may belong to a cycle of period d | p that is still
// converging slowly (multiplier near a root of unity makes the p-step gap shrink
// first). With e the distance to the cycle, the p-step gap is about
// |e| |1 - 1/mu_p|; a true d-cycle leaves |G^d(z) - z| of the same order as |e|.
int minimal_period(Complex lambda, Complex z, int period, double gap) {
  const Complex mu = cycle_multiplier(lambda, z, period);
  const double denom = std::abs(1.0 - mu);
  const double distance = denom > 0.0 ? gap * std::abs(mu) / denom : std::numeric_limits<double>::infinity();
  const double threshold = kReturnTolerance + 4.0 * distance;
  for (int d = 1; d < period; ++d) {
    if (period % d == 0 && std::abs(iterate(lambda, z, d) - z) < threshold) return d;
  }
  return period;
}

// Even index k0 of the critical point closest to some point of the cycle through z.
long nearest_even_anchor(Complex lambda, Complex z, int period) {
  long best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < period; ++k) {
    const long j = std::lround((z.real() - kHalfPi) / (2.0 * kPi));
    const double gap = std::abs(z - Complex(kHalfPi + 2.0 * kPi * static_cast<double>(j), 0.0));
    if (gap < best) {
      best = gap;
      best_k = 2 * j;
    }
    z = lambda * std::sin(z);
  }
  return best_k;
}

}  // namespace

Classification classify_orbit(Complex lambda, Complex start, const ScanOptions& opts) {
  Classification out;
  if (lambda == Complex(0.0) || !is_finite(lambda) || !is_finite(start)) return out;
  const int cap = std::max(1, opts.period_cap);
  std::deque<Complex> recent{start};  // recent.back() is the latest point
  Complex z = start;
  for (int n = 1; n <= opts.max_iter; ++n) {
    z = lambda * std::sin(z);
    if (!(std::abs(z.imag()) <= opts.esc_im)) {
      out.kind = CellKind::kEscaped;
      out.representative = z;
      out.step = n;
      return out;
    }
    const int depth = static_cast<int>(recent.size());
    for (int p = 1; p <= std::min(cap, depth); ++p) {
      const double gap = std::abs(z - recent[static_cast<std::size_t>(depth - p)]);
      if (gap < kReturnTolerance) {
        const int period = minimal_period(lambda, z, p, gap);
        const double multiplier = std::abs(cycle_multiplier(lambda, z, period));
        out.step = n;
        out.representative = z;
        if (multiplier < 1.0) {
          out.kind = CellKind::kAttracting;
          out.period = period;
          out.multiplier = multiplier;
        }
        return out;
      }
    }
    recent.push_back(z);
    if (static_cast<int>(recent.size()) > cap) recent.pop_front();
  }
  out.step = opts.max_iter;
  return out;
}

Classification classify_parameter(Complex lambda, const ScanOptions& opts) {
  return classify_orbit(lambda, lambda, opts);
}

Complex ScanGrid::cell_center(int i, int j) const {
  const double dx = region.width / nx;
  const double dy = region.height / ny;
  const double left = region.center.real() - region.width / 2.0;
  const double top = region.center.imag() + region.height / 2.0;
  return {left + (i + 0.5) * dx, top - (j + 0.5) * dy};
}

std::optional<std::pair<int, int>> ScanGrid::cell_of(Complex lambda) const {
  const double dx = region.width / nx;
  const double dy = region.height / ny;
  const double left = region.center.real() - region.width / 2.0;
  const double top = region.center.imag() + region.height / 2.0;
  const double fi = std::floor((lambda.real() - left) / dx);
  // (bottom, top] rows: a point on a row's lower edge belongs to the row below.
  const double fj = std::floor((top - lambda.imag()) / dy);
  if (!(fi >= 0.0 && fi < nx && fj >= 0.0 && fj < ny)) return std::nullopt;
  return std::make_pair(static_cast<int>(fi), static_cast<int>(fj));
}

ScanGrid scan_grid(const ScanRegion& region, int nx, int ny, const ScanOptions& opts) {
  if (nx < 1 || ny < 1 || !(region.width > 0.0) || !(region.height > 0.0)) {
    throw std::invalid_argument("scan_grid: resolution and extent must be positive");
  }
  ScanGrid grid;
  grid.region = region;
  grid.nx = nx;
  grid.ny = ny;
  grid.cells.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), Classification{});
  const auto excluded = grid.cell_of(Complex(0.0, 0.0));

  parallel_for(static_cast<std::size_t>(ny), opts.threads, [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < nx; ++i) {
      if (excluded && excluded->first == i && excluded->second == j) continue;
      grid.cells[row * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)] =
          classify_parameter(grid.cell_center(i, j), opts);
    }
  });
  return grid;
}

std::vector<ScanCenter> extract_centers(const ScanGrid& grid) {
  const std::size_t count = grid.cells.size();
  std::vector<int> label(count, -1);
  std::vector<ScanCenter> out;
  std::vector<Complex> accepted;

  auto index = [&](int i, int j) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(i);
  };

  int next_label = 0;
  for (int j0 = 0; j0 < grid.ny; ++j0) {
    for (int i0 = 0; i0 < grid.nx; ++i0) {
      const Classification& start = grid.cell(i0, j0);
      if (start.kind != CellKind::kAttracting || label[index(i0, j0)] >= 0) continue;

      // Flood fill the 4-connected region of equal period.
      const int id = next_label++;
      std::vector<std::pair<int, int>> stack{{i0, j0}};
      label[index(i0, j0)] = id;
      std::size_t cells = 0;
      std::pair<int, int> seed{i0, j0};
      while (!stack.empty()) {
        const auto [i, j] = stack.back();
        stack.pop_back();
        ++cells;
        const Classification& c = grid.cell(i, j);
        const Classification& best = grid.cell(seed.first, seed.second);
        if (c.multiplier < best.multiplier ||
            (c.multiplier == best.multiplier && index(i, j) < index(seed.first, seed.second))) {
          seed = {i, j};
        }
        const std::pair<int, int> around[] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
        for (const auto& [a, b] : around) {
          if (a < 0 || b < 0 || a >= grid.nx || b >= grid.ny) continue;
          const Classification& n = grid.cell(a, b);
          if (n.kind == CellKind::kAttracting && n.period == start.period && label[index(a, b)] < 0) {
            label[index(a, b)] = id;
            stack.emplace_back(a, b);
          }
        }
      }

      ScanCenter center;
      center.period = start.period;
      center.region_cells = cells;
      center.seed = grid.cell_center(seed.first, seed.second);
      center.result.lambda_star = center.seed;

      const Classification& seed_cell = grid.cell(seed.first, seed.second);
      const long k0 = nearest_even_anchor(center.seed, seed_cell.representative, center.period);
      try {
        const NewtonSolution sol = newton_closure(center.seed, center.period, k0);
        const auto landing = grid.cell_of(sol.lambda);
        if (!landing || label[index(landing->first, landing->second)] != id) {
          center.note = "Newton left the region (limit " + format_complex(sol.lambda) + ")";
        } else {
          center.itinerary = itinerary_of_parameter(sol.lambda, center.period);
          center.certificate = certify_center(sol.lambda, *center.itinerary);
          center.result = center_from_certificate(sol.lambda, *center.certificate);
          center.result.iterations = sol.steps;
          center.result.final_displacement = sol.last_step;
          center.refined = true;
        }
      } catch (const NewtonFailure& e) {
        center.note = e.what();
      } catch (const std::domain_error& e) {
        center.note = e.what();
      }
      // Pieces of one component split by unresolved cells refine to the same center.
      if (center.refined) {
        const bool duplicate = std::any_of(accepted.begin(), accepted.end(), [&](Complex c) {
          return std::abs(c - center.result.lambda_star) < kDedupTolerance;
        });
        if (duplicate) continue;
        accepted.push_back(center.result.lambda_star);
      }
      out.push_back(std::move(center));
    }
  }
  return out;
}

unsigned char pgm_level(const Classification& c) {
  switch (c.kind) {
    case CellKind::kEscaped: return 255;
    case CellKind::kUnresolved: return 0;
    case CellKind::kAttracting: return static_cast<unsigned char>(32 + 16 * ((c.period - 1) % 13));
  }
  return 0;
}

void write_pgm(std::ostream& out, const ScanGrid& grid) {
  out << "P5\n" << grid.nx << ' ' << grid.ny << "\n255\n";
  std::string row(static_cast<std::size_t>(grid.nx), '\0');
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      row[static_cast<std::size_t>(i)] = static_cast<char>(pgm_level(grid.cell(i, j)));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_pgm(const ScanGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_pgm(out, grid);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

void write_centers_csv(std::ostream& out, const std::vector<ScanCenter>& centers) {
  out << "re_lambda,im_lambda,period,residual,certified\n";
  for (const auto& c : centers) {
    if (!c.refined) continue;
    out << format_real(c.result.lambda_star.real()) << ',' << format_real(c.result.lambda_star.imag())
        << ',' << c.period << ',' << format_real(c.result.orbit_residual) << ','
        << (c.result.converged ? "true" : "false") << '\n';
  }
}

}  // namespace sine_thurston
