#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rspde/grid.hpp"

namespace rspde {

namespace detail {

// splitmix64 finalizer; the counter-keyed chain below is the generator.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Brownian-sheet increments on the fine grid: cell (i, c) carries the sheet
// mass of [i*dt,(i+1)*dt] x [c/n_fine,(c+1)/n_fine], an independent
// N(0, dt/n_fine) variable keyed by (seed, i, c). Nothing is materialized;
// any sub-block can be regenerated on demand.
struct SheetIncrements {
  int n_fine = 2;
  double dt = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;

  static SheetIncrements sample(int n_fine, double dt, int steps, std::uint64_t seed);

  // Standard-normal draw for a cell.
  double normal(int step, int cell) const;

  // Sheet mass of one fine cell.
  double cell(int step, int cell) const;

  // Sheet mass of [step dt, (step+1) dt] x [k/n, (k+1)/n] for a divisor
  // resolution n. Halving splits pairwise, so the mass at n equals the sum
  // of its two children at 2n bit-exactly.
  double mass(int step, int n, int k) const;
};

// Drivers for the lattice system at resolution n: increment (step, k) is
// sqrt(n) times the sheet mass of the cell right of node k, so each driver
// is a standard Brownian increment with variance dt.
struct LatticeDriver {
  GridSpec grid;
  double dt = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;   // provenance of the generating sheet
  int source_n_fine = 0;    // 0 when hand-built
  std::vector<double> increments;  // steps x (n-1), row-major

  LatticeDriver(const GridSpec& g, double dt_, int steps_)
      : grid(g), dt(dt_), steps(steps_), increments(static_cast<size_t>(steps_) * g.interior_count(), 0.0) {}

  double increment(int step, int k) const {  // k = 1..n-1
    return increments[static_cast<size_t>(step) * grid.interior_count() + (k - 1)];
  }
  double& increment(int step, int k) {
    return increments[static_cast<size_t>(step) * grid.interior_count() + (k - 1)];
  }
};

LatticeDriver coarsen(const SheetIncrements& sheet, int n);

// Binary exchange format, little-endian: u64 n_fine, f64 dt, u64 steps,
// u64 seed, then steps*n_fine cell increments as f64.
void dump_sheet(const SheetIncrements& sheet, std::ostream& os);

struct SheetDump {
  std::uint64_t n_fine = 0;
  double dt = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<double> cells;
};

SheetDump load_sheet(std::istream& is);

}  // namespace rspde
