#pragma once

#include <span>

#include "rspde/errors.hpp"
#include "rspde/grid.hpp"

namespace rspde {

// Second-difference matrix A on the interior nodes: A_kk = -2, A_ki = 1 for
// |k-i| = 1, zero boundary values. The operator of interest is n^2 * A.
struct DiscreteLaplacian {
  GridSpec grid;

  explicit DiscreteLaplacian(const GridSpec& g) : grid(g) {}

  // out = A v (unscaled stencil).
  void apply_unscaled(std::span<const double> v, std::span<double> out) const {
    const int m = grid.interior_count();
    if (static_cast<int>(v.size()) != m || static_cast<int>(out.size()) != m)
      throw DimensionError("DiscreteLaplacian: vector length != n-1");
    for (int i = 0; i < m; ++i) {
      const double left = (i > 0) ? v[i - 1] : 0.0;
      const double right = (i < m - 1) ? v[i + 1] : 0.0;
      out[i] = left - 2.0 * v[i] + right;
    }
  }

  // out = n^2 A v.
  void apply(std::span<const double> v, std::span<double> out) const {
    apply_unscaled(v, out);
    const double s = static_cast<double>(grid.n) * grid.n;
    for (auto& x : out) x *= s;
  }
};

}  // namespace rspde
