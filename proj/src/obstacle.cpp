#include "rspde/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rspde/laplacian.hpp"

namespace rspde {

BoundaryPath discretize(const ObstacleInstance& inst, const GridSpec& grid, double dt) {
  if (dt <= 0.0) throw ConfigError("discretize: dt must be > 0");
  const double ratio = inst.T / dt;
  const int steps = static_cast<int>(std::llround(ratio));
  if (steps < 1 || std::abs(steps - ratio) > 1e-9 * ratio)
    throw ConfigError("discretize: dt does not divide the horizon T");
  auto path = BoundaryPath::from_callable(inst.V, grid, dt, steps);
  if (!path.feasible_at_start())
    throw PreconditionError("discretize: V(0,.) is negative at a node");
  return path;
}

ObstacleSolution solve(const ObstacleInstance& inst, const GridSpec& grid, const SolverConfig& cfg) {
  BoundaryPath V = discretize(inst, grid, cfg.dt);
  SkorohodSolution s = rspde::solve(V, cfg);
  ObstacleSolution out{PiecewiseLinearField(grid, std::move(s.Z)), std::move(s.eta),
                       s.complementarity_residual, {}};
  return out;
}

std::vector<double> weak_form_residual(const ObstacleSolution& sol,
                                       const std::function<double(double)>& phi) {
  if (std::abs(phi(0.0)) > 1e-12 || std::abs(phi(1.0)) > 1e-12)
    throw PreconditionError("weak_form_residual: phi must vanish at 0 and 1");
  const GridSpec& grid = sol.Z_field.grid;
  const int m = grid.interior_count();
  const double inv_n = 1.0 / grid.n;
  const double dt = sol.Z_field.path.dt;

  std::vector<double> phin(m), lap_phin(m);
  for (int k = 1; k <= m; ++k) phin[k - 1] = phi(grid.node(k));
  DiscreteLaplacian(grid).apply(phin, lap_phin);

  const SampledPath& Z = sol.Z_field.path;
  std::vector<double> residual(Z.steps() + 1, 0.0);
  double integral = 0.0;  // int_0^t <n^2 A phi, Z(s)>/n ds, left endpoint rule
  for (int i = 0; i <= Z.steps(); ++i) {
    auto z = Z.at(i);
    auto e = sol.eta.at(i);
    double zphi = 0.0, etaphi = 0.0;
    for (int k = 0; k < m; ++k) {
      zphi += z[k] * phin[k];
      etaphi += e[k] * phin[k];
    }
    residual[i] = (zphi - etaphi) * inv_n - integral;
    double zlap = 0.0;
    for (int k = 0; k < m; ++k) zlap += z[k] * lap_phin[k];
    integral += dt * zlap * inv_n;
  }
  return residual;
}

ConvergenceTable convergence_study(const ObstacleInstance& inst, const std::vector<int>& n_list,
                                   const SolverConfig& cfg) {
  if (n_list.size() < 3) throw ConfigError("convergence_study: need at least 3 resolutions");
  for (size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i] >= n_list[i + 1] || n_list[i] < 2)
      throw ConfigError("convergence_study: resolutions must be ascending and >= 2");

  const int ref_n = n_list.back();
  ObstacleSolution ref = solve(inst, GridSpec(ref_n), cfg);

  // Common evaluation grid: the coarsest lattice's nodes, every 10th time step.
  const GridSpec coarse(n_list.front());
  std::vector<double> xs;
  for (int k = 1; k < coarse.n; ++k) xs.push_back(coarse.node(k));
  const int steps = ref.Z_field.path.steps();

  ConvergenceTable table;
  table.reference = ref_n;
  for (size_t i = 0; i + 1 < n_list.size(); ++i) {
    ObstacleSolution sol = solve(inst, GridSpec(n_list[i]), cfg);
    double gap = 0.0;
    for (int s = 0; s <= steps; s += 10) {
      const double t = s * cfg.dt;
      for (double x : xs)
        gap = std::max(gap, std::abs(sol.Z_field.eval(t, x) - ref.Z_field.eval(t, x)));
    }
    table.resolutions.push_back(n_list[i]);
    table.gaps.push_back(gap);
  }
  table.monotone = true;
  for (size_t i = 0; i + 1 < table.gaps.size(); ++i)
    if (!(table.gaps[i + 1] < table.gaps[i])) table.monotone = false;
  return table;
}

double holder_modulus(const ObstacleSolution& sol, int samples, unsigned long long seed) {
  const double T = sol.Z_field.horizon();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, T), ux(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = ut(rng), s = ut(rng), x = ux(rng), y = ux(rng);
    const double denom = std::sqrt(std::abs(t - s)) + std::abs(x - y);
    if (denom < 1e-9) continue;
    const double diff = sol.Z_field.eval(t, x) - sol.Z_field.eval(s, y);
    worst = std::max(worst, diff * diff / denom);
  }
  return worst;
}

std::vector<std::vector<double>> eta_histogram(const ObstacleSolution& sol, int time_bins) {
  if (time_bins < 1) throw ConfigError("eta_histogram: need at least one bin");
  const int m = sol.eta.dim;
  const int steps = sol.eta.steps();
  const double inv_n = 1.0 / sol.Z_field.grid.n;
  std::vector<std::vector<double>> hist(time_bins, std::vector<double>(m, 0.0));
  for (int i = 0; i < steps; ++i) {
    const int bin = std::min(time_bins - 1, i * time_bins / steps);
    auto e0 = sol.eta.at(i);
    auto e1 = sol.eta.at(i + 1);
    for (int k = 0; k < m; ++k) hist[bin][k] += (e1[k] - e0[k]) * inv_n;
  }
  return hist;
}

double near_boundary_eta_mass(const ObstacleSolution& sol, double eps) {
  const GridSpec& grid = sol.Z_field.grid;
  auto total = sol.eta.at(sol.eta.steps());
  double mass = 0.0;
  for (int k = 1; k < grid.n; ++k) {
    const double x = grid.node(k);
    if (x <= eps || x >= 1.0 - eps) mass += total[k - 1] / grid.n;
  }
  return mass;
}

ObstacleInstance mollify_in_space(const ObstacleInstance& inst, int m) {
  if (m < 1) throw ConfigError("mollify_in_space: width parameter must be >= 1");
  const double h = 1.0 / m;
  auto base = inst.V;
  // odd reflection keeps the mollified field pinned to V's boundary behaviour
  auto extended = [base](double t, double x) {
    if (x < 0.0) return -base(t, -x);
    if (x > 1.0) return -base(t, 2.0 - x);
    return base(t, x);
  };
  auto smooth = [extended, h](double t, double x) {
    // midpoint quadrature of the triangle-kernel convolution
    constexpr int quad = 33;
    const double dz = 2.0 * h / quad;
    double acc = 0.0;
    for (int i = 0; i < quad; ++i) {
      const double z = -h + (i + 0.5) * dz;
      const double weight = (1.0 - std::abs(z) / h) / h;
      acc += weight * extended(t, x - z) * dz;
    }
    return acc;
  };
  return ObstacleInstance{smooth, inst.T, Smoothness::C12};
}

}  // namespace rspde
