#include "rspde/skorohod.hpp"

#include <algorithm>
#include <cmath>

namespace rspde {

BoundaryPath BoundaryPath::from_callable(const std::function<double(double, double)>& v,
                                         const GridSpec& grid, double dt, int steps) {
  if (dt <= 0.0 || steps < 1) throw ConfigError("BoundaryPath: dt and steps must be positive");
  SampledPath path(dt, grid.interior_count(), steps);
  for (int i = 0; i <= steps; ++i) {
    auto row = path.at(i);
    for (int k = 1; k < grid.n; ++k) row[k - 1] = v(i * dt, grid.node(k));
  }
  return BoundaryPath(grid, std::move(path));
}

double default_complementarity_tol(const BoundaryPath& V, double dt) {
  return 10.0 * dt * (1.0 + V.samples.max_abs());
}

namespace {

void check_config(const BoundaryPath& V, const SolverConfig& cfg) {
  if (cfg.dt <= 0.0) throw ConfigError("SolverConfig: dt must be > 0");
  if (std::abs(cfg.dt - V.samples.dt) > 1e-12 * cfg.dt)
    throw ConfigError("SolverConfig: dt does not match the boundary path sampling");
  if (!V.feasible_at_start())
    throw PreconditionError("solve: V(0) has a negative component, Z(0) = 0 is infeasible");
}

}  // namespace

SkorohodSolution solve_projected(const BoundaryPath& V, const SolverConfig& cfg) {
  if (cfg.backend != Backend::projected_exponential)
    throw ConfigError("solve_projected: backend mismatch");
  check_config(V, cfg);
  const int m = V.grid.interior_count();
  const int steps = V.samples.steps();
  SpectralBasis basis(V.grid);

  SkorohodSolution sol;
  sol.Z = SampledPath(cfg.dt, m, steps);
  sol.eta = SampledPath(cfg.dt, m, steps);
  std::vector<double> zstar(m);
  for (int i = 0; i < steps; ++i) {
    basis.semigroup_apply(cfg.dt, sol.Z.at(i), zstar);
    auto vnext = V.samples.at(i + 1);
    auto znext = sol.Z.at(i + 1);
    auto eta_prev = sol.eta.at(i);
    auto eta_next = sol.eta.at(i + 1);
    for (int k = 0; k < m; ++k) {
      const double clipped = std::max(zstar[k], -vnext[k]);
      znext[k] = clipped;
      eta_next[k] = eta_prev[k] + (clipped - zstar[k]);
    }
  }
  sol.complementarity_residual = complementarity_residual(sol, V);
  return sol;
}

SkorohodSolution solve_penalized(const BoundaryPath& V, const SolverConfig& cfg) {
  if (cfg.backend != Backend::penalized)
    throw ConfigError("solve_penalized: backend mismatch");
  if (cfg.epsilon <= 0.0) throw ConfigError("solve_penalized: epsilon must be > 0");
  check_config(V, cfg);
  const int m = V.grid.interior_count();
  const int steps = V.samples.steps();
  SpectralBasis basis(V.grid);

  SkorohodSolution sol;
  sol.Z = SampledPath(cfg.dt, m, steps);
  sol.eta = SampledPath(cfg.dt, m, steps);
  std::vector<double> zstar(m);
  const double gain = 2.0 / cfg.epsilon;
  for (int i = 0; i < steps; ++i) {
    auto z = sol.Z.at(i);
    auto v = V.samples.at(i);
    basis.semigroup_apply(cfg.dt, z, zstar);
    auto znext = sol.Z.at(i + 1);
    auto eta_prev = sol.eta.at(i);
    auto eta_next = sol.eta.at(i + 1);
    for (int k = 0; k < m; ++k) {
      const double deficit = std::max(0.0, -(z[k] + v[k]));
      const double push = cfg.dt * gain * deficit;
      znext[k] = zstar[k] + push;
      eta_next[k] = eta_prev[k] + push;
    }
  }
  sol.complementarity_residual = complementarity_residual(sol, V);
  return sol;
}

SkorohodSolution solve(const BoundaryPath& V, const SolverConfig& cfg) {
  return cfg.backend == Backend::projected_exponential ? solve_projected(V, cfg)
                                                       : solve_penalized(V, cfg);
}

double complementarity_residual(const SkorohodSolution& sol, const BoundaryPath& V) {
  const int m = V.grid.interior_count();
  if (sol.Z.dim != m || sol.eta.dim != m || sol.Z.steps() != V.samples.steps())
    throw DimensionError("complementarity_residual: grid mismatch");
  double acc = 0.0;
  for (int i = 0; i < sol.Z.steps(); ++i) {
    auto z = sol.Z.at(i);
    auto v = V.samples.at(i);
    auto e0 = sol.eta.at(i);
    auto e1 = sol.eta.at(i + 1);
    for (int k = 0; k < m; ++k) acc += (z[k] + v[k]) * (e1[k] - e0[k]);
  }
  return acc;
}

ComparisonGap comparison_gap(const SkorohodSolution& sol1, const SkorohodSolution& sol2,
                             const BoundaryPath& V1, const BoundaryPath& V2) {
  if (!(V1.grid == V2.grid) || V1.samples.steps() != V2.samples.steps() ||
      sol1.Z.steps() != sol2.Z.steps() || sol1.Z.dim != sol2.Z.dim)
    throw DimensionError("comparison_gap: grid mismatch");
  double lhs = 0.0, rhs = 0.0;
  for (size_t i = 0; i < sol1.Z.data.size(); ++i)
    lhs = std::max(lhs, std::abs(sol1.Z.data[i] - sol2.Z.data[i]));
  for (size_t i = 0; i < V1.samples.data.size(); ++i)
    rhs = std::max(rhs, std::abs(V1.samples.data[i] - V2.samples.data[i]));
  return {lhs, rhs};
}

}  // namespace rspde
