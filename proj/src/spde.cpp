#include "rspde/spde.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

namespace rspde {

namespace {

int step_count(double T, double dt) {
  const double ratio = T / dt;
  const int steps = static_cast<int>(std::llround(ratio));
  if (steps < 1 || std::abs(steps - ratio) > 1e-9 * ratio)
    throw ConfigError("SimulationConfig: dt does not divide T");
  return steps;
}

std::vector<double> sample_initial(const SimulationConfig& cfg) {
  if (std::abs(cfg.u0(0.0)) > 1e-12 || std::abs(cfg.u0(1.0)) > 1e-12)
    throw ConfigError("SimulationConfig: u0 must vanish at 0 and 1");
  std::vector<double> u0(cfg.grid.interior_count());
  for (int k = 1; k < cfg.grid.n; ++k) {
    u0[k - 1] = cfg.u0(cfg.grid.node(k));
    if (u0[k - 1] < 0.0) throw ConfigError("SimulationConfig: u0 must be nonnegative");
  }
  return u0;
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

SimulatedPath simulate(const SimulationConfig& cfg, const LatticeDriver& driver) {
  if (!(driver.grid == cfg.grid)) throw ConfigError("simulate: driver grid does not match");
  if (std::abs(driver.dt - cfg.dt) > 1e-12 * cfg.dt)
    throw ConfigError("simulate: driver dt does not match");
  const int steps = step_count(cfg.T, cfg.dt);
  if (driver.steps < steps) throw ConfigError("simulate: driver has too few steps");

  const GridSpec& grid = cfg.grid;
  const int m = grid.interior_count();
  const double root_n = std::sqrt(static_cast<double>(grid.n));
  SpectralBasis basis(grid);

  SampledPath u(cfg.dt, m, steps);
  SampledPath eta(cfg.dt, m, steps);
  SampledPath v = cfg.store_companion ? SampledPath(cfg.dt, m, steps) : SampledPath();
  auto u0 = sample_initial(cfg);
  std::copy(u0.begin(), u0.end(), u.at(0).begin());
  if (cfg.store_companion) std::copy(u0.begin(), u0.end(), v.at(0).begin());

  std::vector<double> ustar(m), vstar(m), forcing(m);
  for (int i = 0; i < steps; ++i) {
    const double t = i * cfg.dt;
    auto ui = u.at(i);
    for (int k = 0; k < m; ++k) {
      const double x = grid.node(k + 1);
      forcing[k] = cfg.dt * cfg.coefficients.f(t, x, ui[k]) +
                   root_n * cfg.coefficients.sigma(t, x, ui[k]) * driver.increment(i, k + 1);
    }
    basis.semigroup_apply(cfg.dt, ui, ustar);
    auto unext = u.at(i + 1);
    auto eta_prev = eta.at(i);
    auto eta_next = eta.at(i + 1);
    for (int k = 0; k < m; ++k) {
      const double star = ustar[k] + forcing[k];
      if (!std::isfinite(star)) throw NumericError("simulate: non-finite state", i);
      const double clipped = std::max(star, 0.0);
      unext[k] = clipped;
      eta_next[k] = eta_prev[k] + (clipped - star);
    }
    if (cfg.store_companion) {
      basis.semigroup_apply(cfg.dt, v.at(i), vstar);
      auto vnext = v.at(i + 1);
      for (int k = 0; k < m; ++k) vnext[k] = vstar[k] + forcing[k];
    }
  }

  SimulatedPath path{PiecewiseLinearField(grid, std::move(u)), std::move(eta), std::move(v),
                     DriverRef{driver.seed, driver.source_n_fine}};
  return path;
}

std::vector<double> complementarity_residuals(const SimulatedPath& path) {
  const int m = path.eta.dim;
  std::vector<double> res(m, 0.0);
  for (int i = 1; i <= path.eta.steps(); ++i) {
    auto ui = path.u_field.path.at(i);
    auto e0 = path.eta.at(i - 1);
    auto e1 = path.eta.at(i);
    for (int k = 0; k < m; ++k) res[k] += ui[k] * (e1[k] - e0[k]);
  }
  return res;
}

double mild_residual(const SimulatedPath& path, const SimulationConfig& cfg,
                     const LatticeDriver& driver,
                     const std::vector<std::pair<double, double>>& probes) {
  if (!path.driver_ref.valid()) throw PreconditionError("mild_residual: path has no driver provenance");
  if (path.driver_ref.seed != driver.seed || path.driver_ref.n_fine != driver.source_n_fine)
    throw PreconditionError("mild_residual: driver does not match the path provenance");

  const GridSpec& grid = cfg.grid;
  const int m = grid.interior_count();
  const double root_n = std::sqrt(static_cast<double>(grid.n));
  SpectralBasis basis(grid);
  const SampledPath& u = path.u_field.path;

  auto u0 = sample_initial(cfg);
  std::vector<double> u0_hat(m);
  basis.transform(u0, u0_hat);

  // Per-step combined source in sine coordinates:
  //   dt F_i / sqrt(n) + Sigma_i dW_i + deta_i / sqrt(n)
  const int total = u.steps();
  std::vector<double> hat(static_cast<size_t>(total) * m), cell(m);
  for (int i = 0; i < total; ++i) {
    const double t = i * cfg.dt;
    auto ui = u.at(i);
    auto e0 = path.eta.at(i);
    auto e1 = path.eta.at(i + 1);
    for (int k = 0; k < m; ++k) {
      const double x = grid.node(k + 1);
      cell[k] = cfg.dt * cfg.coefficients.f(t, x, ui[k]) / root_n +
                cfg.coefficients.sigma(t, x, ui[k]) * driver.increment(i, k + 1) +
                (e1[k] - e0[k]) / root_n;
    }
    basis.transform(cell, std::span<double>(hat.data() + static_cast<size_t>(i) * m, m));
  }

  double worst = 0.0;
  std::vector<double> mode_sum(m);
  for (auto [t, x] : probes) {
    const int step = static_cast<int>(std::llround(t / cfg.dt));
    if (step < 0 || step > total || std::abs(step * cfg.dt - t) > 1e-9)
      throw DomainError("mild_residual: probe time off the grid");
    for (int j = 0; j < m; ++j)
      mode_sum[j] = std::exp(basis.eigenvalue(j + 1) * t) * u0_hat[j] / root_n;
    for (int i = 0; i < step; ++i) {
      const double tau = (step - i) * cfg.dt;
      const double* row = hat.data() + static_cast<size_t>(i) * m;
      for (int j = 0; j < m; ++j) mode_sum[j] += std::exp(basis.eigenvalue(j + 1) * tau) * row[j];
    }
    double rhs = 0.0;
    for (int j = 0; j < m; ++j) rhs += basis.phi_lift(j + 1, x) * mode_sum[j];
    const double lhs = path.u_field.eval(t, x);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double coupled_gap(const SimulationConfig& cfg, const SheetIncrements& sheet,
                   std::pair<int, int> n_pair) {
  const auto [nc, nf] = n_pair;
  if (nc < 2 || nf != 2 * nc) throw ConfigError("coupled_gap: expected a pair (n, 2n)");
  if (sheet.n_fine % nc != 0 || sheet.n_fine % nf != 0)
    throw ConfigError("coupled_gap: resolutions must divide the sheet's n_fine");
  if (std::abs(sheet.dt - cfg.dt) > 1e-12 * cfg.dt)
    throw ConfigError("coupled_gap: sheet dt does not match");

  SimulationConfig coarse = cfg;
  coarse.grid = GridSpec(nc);
  SimulationConfig fine = cfg;
  fine.grid = GridSpec(nf);
  SimulatedPath pc = simulate(coarse, coarsen(sheet, nc));
  SimulatedPath pf = simulate(fine, coarsen(sheet, nf));

  // Common sample grid: the finer lattice's nodes at every step.
  const int steps = pc.u_field.path.steps();
  double gap = 0.0;
  for (int i = 0; i <= steps; ++i) {
    auto uf = pf.u_field.path.at(i);
    auto uc = pc.u_field.path.at(i);
    for (int k = 1; k < nf; ++k) {
      const double coarse_val = (k % 2 == 0) ? uc[k / 2 - 1]
                                             : 0.5 * ((k / 2 >= 1 ? uc[k / 2 - 1] : 0.0) +
                                                      (k / 2 + 1 <= nc - 1 ? uc[k / 2] : 0.0));
      gap = std::max(gap, std::abs(uf[k - 1] - coarse_val));
    }
  }
  return gap;
}

MomentEstimate moment_estimate(const SimulationConfig& cfg, double p, int M) {
  if (p < 1.0) throw ConfigError("moment_estimate: p must be >= 1");
  if (M < 10) throw ConfigError("moment_estimate: need at least 10 paths");
  const int steps = step_count(cfg.T, cfg.dt);
  std::vector<double> values(M);
  for (int j = 0; j < M; ++j) {
    auto sheet = SheetIncrements::sample(cfg.grid.n, cfg.dt, steps, cfg.seed + j);
    SimulatedPath path = simulate(cfg, coarsen(sheet, cfg.grid.n));
    values[j] = std::pow(path.u_field.sup_abs(), p);
  }
  Kahan mean_acc;
  for (double v : values) mean_acc.add(v);
  const double mean = mean_acc.sum / M;
  Kahan var_acc;
  for (double v : values) var_acc.add((v - mean) * (v - mean));
  const double sd = std::sqrt(var_acc.sum / (M - 1));
  const double half = 1.96 * sd / std::sqrt(static_cast<double>(M));
  return {mean, mean - half, mean + half};
}

double hypothesis_violation(const Coefficients& coeffs, double T, int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, T), ux(0.0, 1.0), uu(-20.0, 20.0);
  double worst = -1e300;
  for (int i = 0; i < probes; ++i) {
    const double t = ut(rng), x = ux(rng), y = ux(rng), u = uu(rng), v = uu(rng);
    const double lip = std::abs(coeffs.f(t, x, u) - coeffs.f(t, y, v)) +
                       std::abs(coeffs.sigma(t, x, u) - coeffs.sigma(t, y, v)) -
                       coeffs.lipschitz_constant * (std::abs(x - y) + std::abs(u - v));
    const double growth = std::abs(coeffs.f(t, x, u)) - coeffs.growth_constant * (1.0 + std::abs(u));
    worst = std::max({worst, lip, growth});
  }
  return worst;
}

namespace {

void dump_field(const SampledPath& field, int n, std::uint64_t seed, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  auto put_u64 = [&os](std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); };
  auto put_f64 = [&os](double v) { os.write(reinterpret_cast<const char*>(&v), 8); };
  put_u64(static_cast<std::uint64_t>(n));
  put_f64(field.dt);
  put_u64(static_cast<std::uint64_t>(field.steps() + 1));
  put_u64(seed);
  for (double v : field.data) put_f64(v);
}

}  // namespace

void export_path(const SimulatedPath& path, const SimulationConfig& cfg, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const fs::path dir(directory);
  dump_field(path.u_field.path, cfg.grid.n, path.driver_ref.seed, dir / "u_field.bin");
  dump_field(path.eta, cfg.grid.n, path.driver_ref.seed, dir / "eta.bin");
  if (path.has_companion()) dump_field(path.v_path, cfg.grid.n, path.driver_ref.seed, dir / "v_field.bin");

  nlohmann::json manifest{
      {"kind", "simulated_path"},
      {"n", cfg.grid.n},
      {"dt", cfg.dt},
      {"T", cfg.T},
      {"seed", cfg.seed},
      {"driver", {{"seed", path.driver_ref.seed}, {"n_fine", path.driver_ref.n_fine}}},
      {"files",
       {{"u", "u_field.bin"}, {"eta", "eta.bin"}, {"v", path.has_companion() ? "v_field.bin" : ""}}},
  };
  std::ofstream os(dir / "manifest.json");
  os << manifest.dump(2) << "\n";
}

}  // namespace rspde
