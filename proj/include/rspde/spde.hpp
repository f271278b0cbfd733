#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rspde/noise.hpp"
#include "rspde/skorohod.hpp"

namespace rspde {

// Reaction and noise coefficients (t, x, u) -> R, with the declared constants
// they are supposed to obey: Lipschitz in (x, u) and linear growth of f.
struct Coefficients {
  std::function<double(double, double, double)> f;
  std::function<double(double, double, double)> sigma;
  double lipschitz_constant = 1.0;
  double growth_constant = 1.0;
};

struct SimulationConfig {
  GridSpec grid;
  double dt = 1e-4;
  double T = 0.5;
  std::function<double(double)> u0;  // nonnegative, u0(0) = u0(1) = 0
  std::uint64_t seed = 0;
  Coefficients coefficients;
  bool store_companion = true;
};

struct DriverRef {
  std::uint64_t seed = 0;
  int n_fine = 0;
  bool valid() const { return n_fine > 0; }
};

struct SimulatedPath {
  PiecewiseLinearField u_field;
  SampledPath eta;     // cumulative reflection per node
  SampledPath v_path;  // unreflected companion driven by the same noise (empty if disabled)
  DriverRef driver_ref;

  bool has_companion() const { return v_path.dim > 0; }
};

// One exponential-Euler step per driver row:
//   u* = exp(n^2 A dt) u + dt F(t_i, u) + sqrt(n) Sigma(t_i, u) dW^n,
// then clip to the nonnegative orthant, accumulating the corrections in eta.
// The companion v takes the identical step without clipping, coefficients
// still evaluated at u.
SimulatedPath simulate(const SimulationConfig& cfg, const LatticeDriver& driver);

// Per-node sum_i u_k(t_i) (eta_k(t_i) - eta_k(t_{i-1})): the state paired
// with the increment that produced it, zero by construction for the
// projected step.
std::vector<double> complementarity_residuals(const SimulatedPath& path);

// Max over probes of |u(t,x) - mild-form right side|, the latter assembled
// by quadrature from the discrete kernel, the stored noise increments, the
// drift along the path and the eta increments. Probe times snap to the grid.
double mild_residual(const SimulatedPath& path, const SimulationConfig& cfg,
                     const LatticeDriver& driver,
                     const std::vector<std::pair<double, double>>& probes);

// Simulates resolutions n and 2n from the same sheet and returns the sup-norm
// gap of the lifted fields over the finer lattice's nodes and all steps.
double coupled_gap(const SimulationConfig& cfg, const SheetIncrements& sheet,
                   std::pair<int, int> n_pair);

struct MomentEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Monte Carlo estimate of E[ sup_{t,x} |u(t,x)|^p ] over M paths seeded
// seed, seed+1, ..., with a normal-approximation 95% interval.
MomentEstimate moment_estimate(const SimulationConfig& cfg, double p, int M);

// Largest violation of the declared Lipschitz/growth constants on random
// probes; nonpositive when the declarations hold.
double hypothesis_violation(const Coefficients& coeffs, double T, int probes,
                            std::uint64_t seed = 7);

// JSON manifest + binary field dumps (layout as the sheet dump) for a path.
void export_path(const SimulatedPath& path, const SimulationConfig& cfg,
                 const std::string& directory);

}  // namespace rspde
