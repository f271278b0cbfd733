#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "rspde/errors.hpp"

namespace rspde {

// Uniform lattice on [0,1] with Dirichlet ends. Interior nodes are k/n,
// k = 1..n-1; all vectors in this library have length n-1 and index node k
// at position k-1.
struct GridSpec {
  int n = 2;

  explicit GridSpec(int resolution) : n(resolution) {
    if (n < 2) throw ConfigError("GridSpec: resolution must be >= 2");
  }

  int interior_count() const { return n - 1; }
  double mesh() const { return 1.0 / n; }
  double node(int k) const { return static_cast<double>(k) / n; }

  bool operator==(const GridSpec& other) const { return n == other.n; }
};

// k_n(y) = floor(n*y)/n; y = 1 maps to 1, where every field is 0.
inline double grid_floor(double y, const GridSpec& grid) {
  if (y < 0.0 || y > 1.0) throw DomainError("grid_floor: y outside [0,1]");
  return std::floor(grid.n * y) / grid.n;
}

// Piecewise-linear interpolation of interior node values, 0 at x = 0 and 1.
inline double lift(std::span<const double> values, const GridSpec& grid, double x) {
  if (static_cast<int>(values.size()) != grid.interior_count())
    throw DimensionError("lift: values length != n-1");
  if (x < 0.0 || x > 1.0) throw DomainError("lift: x outside [0,1]");
  const int n = grid.n;
  int k = static_cast<int>(std::floor(n * x));
  if (k >= n) return 0.0;  // x == 1
  const double left = (k == 0) ? 0.0 : values[k - 1];
  const double right = (k == n - 1) ? 0.0 : values[k];
  return left + (n * x - k) * (right - left);
}

// A time-indexed sequence of vectors in R^{n-1} on a uniform time grid.
// Row i holds the state at time i*dt; rows run 0..steps.
struct SampledPath {
  double dt = 0.0;
  int dim = 0;
  std::vector<double> data;  // (steps()+1) x dim, row-major

  SampledPath() = default;
  SampledPath(double dt_, int dim_, int steps_) : dt(dt_), dim(dim_), data(static_cast<size_t>(steps_ + 1) * dim_, 0.0) {}

  int steps() const { return dim == 0 ? 0 : static_cast<int>(data.size() / dim) - 1; }
  double time(int i) const { return i * dt; }
  std::span<const double> at(int i) const { return {data.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)}; }
  std::span<double> at(int i) { return {data.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)}; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }
};

// Space-time field, piecewise linear in x between lattice nodes and linear in
// t between samples; vanishes at x = 0 and x = 1.
struct PiecewiseLinearField {
  GridSpec grid;
  SampledPath path;

  PiecewiseLinearField(const GridSpec& g, SampledPath p) : grid(g), path(std::move(p)) {
    if (path.dim != grid.interior_count())
      throw DimensionError("PiecewiseLinearField: path dim != n-1");
  }

  double horizon() const { return path.steps() * path.dt; }

  double eval(double t, double x) const {
    if (t < 0.0 || t > horizon() * (1.0 + 1e-12))
      throw DomainError("PiecewiseLinearField: t outside [0,T]");
    const int last = path.steps();
    double s = t / path.dt;
    int i = std::min(static_cast<int>(std::floor(s)), last - 1);
    if (last == 0) i = 0;
    const double w = std::min(s - i, 1.0);
    const double a = lift(path.at(i), grid, x);
    if (w == 0.0) return a;
    const double b = lift(path.at(std::min(i + 1, last)), grid, x);
    return a + w * (b - a);
  }

  double node_value(int step, int k) const { return path.at(step)[k - 1]; }

  double sup_abs() const { return path.max_abs(); }
};

}  // namespace rspde
