#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rspde/grid.hpp"
#include "rspde/spectral.hpp"

namespace rspde {

// Time-dependent boundary data: the state is constrained to the moving
// orthant { z : z >= -V(t) }. Samples are piecewise linear in t.
struct BoundaryPath {
  GridSpec grid;
  SampledPath samples;

  BoundaryPath(const GridSpec& g, SampledPath s) : grid(g), samples(std::move(s)) {
    if (samples.dim != grid.interior_count())
      throw DimensionError("BoundaryPath: sample dim != n-1");
  }

  static BoundaryPath from_callable(const std::function<double(double, double)>& v,
                                    const GridSpec& grid, double dt, int steps);

  bool feasible_at_start() const {
    for (double x : samples.at(0))
      if (x < 0.0) return false;
    return true;
  }
};

enum class Backend { projected_exponential, penalized };

struct SolverConfig {
  double dt = 1e-3;
  Backend backend = Backend::projected_exponential;
  double epsilon = 1e-4;            // penalized backend only
  double complementarity_tol = 0.0;  // <= 0 means the default 10*dt*(1+sup|V|)
};

struct SkorohodSolution {
  SampledPath Z;
  SampledPath eta;  // cumulative, componentwise nondecreasing
  double complementarity_residual = 0.0;
};

double default_complementarity_tol(const BoundaryPath& V, double dt);

// One exponential-Euler step per sample: Z* = exp(n^2 A dt) Z(t_i), then
// componentwise projection onto { z >= -V(t_{i+1}) }; eta accumulates the
// projection corrections.
SkorohodSolution solve_projected(const BoundaryPath& V, const SolverConfig& cfg);

// Penalized variant: dZ = n^2 A Z dt + (2/eps) (Z+V)^- dt, exponential step
// for the linear part and explicit penalty force; needs dt <~ eps/2.
SkorohodSolution solve_penalized(const BoundaryPath& V, const SolverConfig& cfg);

SkorohodSolution solve(const BoundaryPath& V, const SolverConfig& cfg);

// sum_k sum_i (Z_k(t_i) + V_k(t_i)) * (eta_k(t_{i+1}) - eta_k(t_i)).
double complementarity_residual(const SkorohodSolution& sol, const BoundaryPath& V);

struct ComparisonGap {
  double lhs;  // sup_{t,k} |Z^1_k - Z^2_k|
  double rhs;  // sup_{t,j} |V^1_j - V^2_j|
};

ComparisonGap comparison_gap(const SkorohodSolution& sol1, const SkorohodSolution& sol2,
                             const BoundaryPath& V1, const BoundaryPath& V2);

}  // namespace rspde
