#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sine_thurston/center_result.hpp"
#include "sine_thurston/combinatorics.hpp"
#include "sine_thurston/oracle.hpp"

namespace sine_thurston {

struct ScanOptions {
  int max_iter = 2000;
  int period_cap = 64;
  double esc_im = 100.0;
  /// Worker threads for scan_grid; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

enum class CellKind { kAttracting, kEscaped, kUnresolved };

struct Classification {
  CellKind kind = CellKind::kUnresolved;
  /// Cycle length for attracting cells, 0 otherwise.
  int period = 0;
  /// Orbit point at detection (attracting) or at escape.
  Complex representative{0.0, 0.0};
  /// |prod lambda cos| over the detected cycle (attracting cells).
  double multiplier = 0.0;
  /// Iteration at which the fate was decided.
  int step = 0;
};

/// Fate of the critical orbit pi/2 -> lambda -> ... under lambda sin z.
Classification classify_parameter(Complex lambda, const ScanOptions& opts = {});

/// Same test for the orbit of an arbitrary start point (e.g. the mirrored critical value -lambda).
Classification classify_orbit(Complex lambda, Complex start, const ScanOptions& opts = {});

struct ScanRegion {
  Complex center{0.0, 0.0};
  double width = 1.0;
  double height = 1.0;
};

/// Raster of classifications. Row 0 is the top (largest imaginary part).
struct ScanGrid {
  ScanRegion region;
  int nx = 0;
  int ny = 0;
  std::vector<Classification> cells;

  const Classification& cell(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)];
  }
  Complex cell_center(int i, int j) const;
  /// Cell (i, j) covering lambda, using half-open cells [left, right) x (bottom, top].
  std::optional<std::pair<int, int>> cell_of(Complex lambda) const;
};

/// Classifies every cell center; the cell covering lambda = 0 is marked unresolved.
ScanGrid scan_grid(const ScanRegion& region, int nx, int ny, const ScanOptions& opts = {});

struct ScanCenter {
  int period = 0;
  /// Parameter of the seed cell (smallest cycle multiplier in the region).
  Complex seed{0.0, 0.0};
  std::size_t region_cells = 0;
  bool refined = false;
  CenterResult result;
  std::optional<Itinerary> itinerary;
  std::optional<Certificate> certificate;
  std::string note;
};

/// One entry per connected same-period attracting region. Refined entries were Newton-
/// polished from the seed cell, landed back inside their region, and carry a certificate;
/// refined centers within 1e-6 of an earlier one are dropped.
std::vector<ScanCenter> extract_centers(const ScanGrid& grid);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gray level of a cell in the PGM rendering.
unsigned char pgm_level(const Classification& c);

/// Binary PGM (P5), one byte per cell, row-major from the top.
void write_pgm(std::ostream& out, const ScanGrid& grid);
/// Throws IoError when the file cannot be written.
void write_pgm(const ScanGrid& grid, const std::string& path);

/// CSV `re_lambda,im_lambda,period,residual,certified` for refined centers.
void write_centers_csv(std::ostream& out, const std::vector<ScanCenter>& centers);

}  // namespace sine_thurston
