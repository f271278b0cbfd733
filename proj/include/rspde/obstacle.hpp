#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rspde/skorohod.hpp"

namespace rspde {

enum class Smoothness { C12, C0 };

// Parabolic obstacle data: the solution field is constrained to
// Z(t,x) >= -V(t,x) with Z(0,.) = 0 and Dirichlet ends. V(0,x) >= 0 keeps the
// start feasible.
struct ObstacleInstance {
  std::function<double(double, double)> V;  // (t, x)
  double T = 1.0;
  Smoothness smoothness = Smoothness::C12;
};

struct ObstacleSolution {
  PiecewiseLinearField Z_field;
  SampledPath eta;  // cumulative per node
  double complementarity_residual = 0.0;
  std::vector<double> weak_residuals;  // max |residual| per tested function, appended by callers
};

// Samples V at the interior nodes and the uniform time grid. dt must divide T.
BoundaryPath discretize(const ObstacleInstance& inst, const GridSpec& grid, double dt);

ObstacleSolution solve(const ObstacleInstance& inst, const GridSpec& grid, const SolverConfig& cfg);

// Residual path of the discrete weak form against a test function phi with
// phi(0) = phi(1) = 0:
//   r(t) = <Z(t), phi>/n - int_0^t <n^2 A phi, Z(s)>/n ds - <phi, eta(t)>/n.
std::vector<double> weak_form_residual(const ObstacleSolution& sol,
                                       const std::function<double(double)>& phi);

struct ConvergenceTable {
  std::vector<int> resolutions;  // all but the reference
  std::vector<double> gaps;      // sup-norm gap to the reference on the common grid
  int reference = 0;
  bool monotone = false;  // strictly decreasing gaps
};

// Solves at every entry of n_list (ascending; the last entry is the
// reference) and reports sup-norm gaps on the coarsest lattice's nodes
// sampled every 10th time step.
ConvergenceTable convergence_study(const ObstacleInstance& inst, const std::vector<int>& n_list,
                                   const SolverConfig& cfg);

// max over random space-time pairs of |Z(t,x)-Z(s,y)|^2 / (sqrt|t-s| + |x-y|).
double holder_modulus(const ObstacleSolution& sol, int samples, unsigned long long seed = 2026);

// Reflection-measure export: cell x time-bin histogram of eta increments with
// the 1/n cell normalization, plus the mass carried near the ends.
std::vector<std::vector<double>> eta_histogram(const ObstacleSolution& sol, int time_bins);
double near_boundary_eta_mass(const ObstacleSolution& sol, double eps);

// V_m: convolution of V(t,.) with a triangle kernel of width 1/m, odd
// reflection beyond the ends. Smooths merely-continuous obstacles.
ObstacleInstance mollify_in_space(const ObstacleInstance& inst, int m);

}  // namespace rspde
