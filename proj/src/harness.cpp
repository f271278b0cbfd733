#include "rspde/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rspde/laplacian.hpp"

namespace rspde {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
  return os.str();
}

BoundaryPath random_boundary_path(const GridSpec& grid, double dt, int steps, int kinks,
                                  double amplitude, std::mt19937_64& rng) {
  const int m = grid.interior_count();
  std::uniform_real_distribution<double> start(0.5, 1.5);
  std::normal_distribution<double> jump(0.0, amplitude);
  std::vector<std::vector<double>> knots(m, std::vector<double>(kinks + 1));
  for (int k = 0; k < m; ++k) {
    knots[k][0] = start(rng);
    for (int j = 1; j <= kinks; ++j) knots[k][j] = knots[k][j - 1] + jump(rng);
  }
  SampledPath path(dt, m, steps);
  for (int i = 0; i <= steps; ++i) {
    const double s = kinks * static_cast<double>(i) / steps;
    const int j = std::min(static_cast<int>(s), kinks - 1);
    const double w = s - j;
    auto row = path.at(i);
    for (int k = 0; k < m; ++k) row[k] = knots[k][j] + w * (knots[k][j + 1] - knots[k][j]);
  }
  return BoundaryPath(grid, std::move(path));
}

namespace {

struct Row {
  std::string check;
  int n;
  double value;
  double threshold;
  bool pass;
  std::uint64_t seed;
};

void append(ResultTable& table, const Row& r) {
  table.rows.push_back({r.check, std::to_string(r.n), format_double(r.value),
                        format_double(r.threshold), r.pass ? "1" : "0", std::to_string(r.seed)});
}

// ---- property_suite ---------------------------------------------------------

void require_seed(const nlohmann::json& params, const std::string& kind) {
  if (!params.contains("seed"))
    throw ConfigError(kind + ": a seed is required for stochastic experiments");
}

ResultTable property_suite(const nlohmann::json& params, bool& all_pass) {
  require_seed(params, "property_suite");
  const int n_max = params.value("n_max", 64);
  const int vectors = params.value("vectors", 10000);
  const int pair_count = params.value("pairs", 100);
  const double dt = params.value("dt", 1e-4);
  const double T = params.value("T", 0.5);
  const std::uint64_t seed = params.value("seed", 1ULL);
  const double orthant_tol = params.value("orthant_tol", 1e-12);

  ResultTable table;
  table.columns = {"check", "n", "value", "threshold", "pass", "seed"};
  all_pass = true;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // orthant sign inequality: <b+, A b> <= 0 and <b-, A b> >= 0
  for (int n = 2; n <= n_max; ++n) {
    const GridSpec grid(n);
    DiscreteLaplacian lap(grid);
    const int m = grid.interior_count();
    std::vector<double> b(m), ab(m);
    double worst_plus = -1e300, worst_minus = -1e300;
    for (int trial = 0; trial < vectors; ++trial) {
      for (auto& x : b) x = unit(rng);
      lap.apply_unscaled(b, ab);
      double ip_plus = 0.0, ip_minus = 0.0;
      for (int k = 0; k < m; ++k) {
        ip_plus += std::max(b[k], 0.0) * ab[k];
        ip_minus += std::max(-b[k], 0.0) * ab[k];
      }
      worst_plus = std::max(worst_plus, ip_plus);
      worst_minus = std::max(worst_minus, -ip_minus);
    }
    Row r1{"orthant_sign_plus", n, worst_plus, orthant_tol, worst_plus <= orthant_tol, seed};
    Row r2{"orthant_sign_minus", n, worst_minus, orthant_tol, worst_minus <= orthant_tol, seed};
    append(table, r1);
    append(table, r2);
    all_pass = all_pass && r1.pass && r2.pass;
  }

  // boundary comparison and complementarity on random path pairs
  const int steps = static_cast<int>(std::llround(T / dt));
  for (int n : {4, 16}) {
    const GridSpec grid(n);
    SolverConfig cfg{dt, Backend::projected_exponential, 0.0, 0.0};
    double worst_cmp = -1e300, worst_res = -1e300;
    for (int p = 0; p < pair_count; ++p) {
      BoundaryPath v1 = random_boundary_path(grid, dt, steps, 16, 0.4, rng);
      BoundaryPath v2 = random_boundary_path(grid, dt, steps, 16, 0.4, rng);
      SkorohodSolution s1 = solve_projected(v1, cfg);
      SkorohodSolution s2 = solve_projected(v2, cfg);
      ComparisonGap gap = comparison_gap(s1, s2, v1, v2);
      const double scale = 1.0 + std::max(v1.samples.max_abs(), v2.samples.max_abs());
      worst_cmp = std::max(worst_cmp, gap.lhs - gap.rhs - 5.0 * std::sqrt(dt) * scale);
      worst_res = std::max(worst_res,
                           s1.complementarity_residual - default_complementarity_tol(v1, dt));
      worst_res = std::max(worst_res,
                           s2.complementarity_residual - default_complementarity_tol(v2, dt));
    }
    Row r1{"boundary_comparison", n, worst_cmp, 0.0, worst_cmp <= 0.0, seed};
    Row r2{"complementarity_residual", n, worst_res, 0.0, worst_res <= 0.0, seed};
    append(table, r1);
    append(table, r2);
    all_pass = all_pass && r1.pass && r2.pass;
  }

  // scalar boundary-tracking case with the known solution Z = t, eta = t + 4t^2
  {
    const GridSpec grid(2);
    const int track_steps = static_cast<int>(std::llround(1.0 / dt));
    BoundaryPath v = BoundaryPath::from_callable([](double t, double) { return -t; }, grid, dt,
                                                 track_steps);
    SkorohodSolution sol =
        solve_projected(v, SolverConfig{dt, Backend::projected_exponential, 0.0, 0.0});
    double err_z = 0.0, err_eta = 0.0;
    for (int i = 0; i <= track_steps; ++i) {
      const double t = i * dt;
      err_z = std::max(err_z, std::abs(sol.Z.at(i)[0] - t));
      err_eta = std::max(err_eta, std::abs(sol.eta.at(i)[0] - (t + 4.0 * t * t)));
    }
    Row r1{"boundary_tracking_z", 2, err_z, 10.0 * dt, err_z <= 10.0 * dt, seed};
    Row r2{"boundary_tracking_eta", 2, err_eta, 20.0 * dt, err_eta <= 20.0 * dt, seed};
    append(table, r1);
    append(table, r2);
    all_pass = all_pass && r1.pass && r2.pass;
  }
  return table;
}

// ---- obstacle_convergence ---------------------------------------------------

ResultTable obstacle_convergence(const nlohmann::json& params, nlohmann::json& extra) {
  ObstacleInstance inst = params.contains("obstacle")
                              ? obstacle_from_json(params.at("obstacle"))
                              : obstacle_preset(params.value("preset", "obstacle_sign_change"));
  auto n_list = params.value("n_list", std::vector<int>{4, 8, 16, 32, 64});
  const int ref_n = params.value("ref_n", 128);
  const double dt = params.value("dt", 1e-4);
  if (params.contains("T")) inst.T = params.at("T").get<double>();

  std::vector<int> all = n_list;
  all.push_back(ref_n);
  SolverConfig cfg{dt, Backend::projected_exponential, 0.0, 0.0};
  ConvergenceTable conv = convergence_study(inst, all, cfg);

  ResultTable table;
  table.columns = {"resolution", "gap"};
  for (size_t i = 0; i < conv.resolutions.size(); ++i)
    table.rows.push_back({std::to_string(conv.resolutions[i]), format_double(conv.gaps[i])});
  extra["monotone"] = conv.monotone;
  extra["reference"] = conv.reference;
  return table;
}

// ---- spde_convergence -------------------------------------------------------

ResultTable spde_convergence(const nlohmann::json& params) {
  require_seed(params, "spde_convergence");
  const SpdePreset preset = spde_preset(params.value("preset", "nualart_pardoux"));
  auto pairs = params.value("pairs", std::vector<std::vector<int>>{{4, 8}, {8, 16}, {16, 32}});
  const int M = params.value("M", 100);
  const double p = params.value("p", 2.0);
  const double dt = params.value("dt", 1e-4);
  const double T = params.value("T", 0.25);
  const std::uint64_t seed = params.value("seed", 42ULL);

  int n_fine = 2;
  for (const auto& pr : pairs) {
    if (pr.size() != 2) throw ConfigError("spde_convergence: pairs must be [n, 2n]");
    n_fine = std::max(n_fine, std::max(pr[0], pr[1]));
  }
  const int steps = static_cast<int>(std::llround(T / dt));

  SimulationConfig cfg{GridSpec(2), dt, T, preset.u0, seed, preset.coefficients, false};
  ResultTable table;
  table.columns = {"n_coarse", "n_fine", "mean_gap_p", "ci_low", "ci_high", "M", "seed"};
  for (const auto& pr : pairs) {
    std::vector<double> gaps(M);
    for (int j = 0; j < M; ++j) {
      auto sheet = SheetIncrements::sample(n_fine, dt, steps, seed + j);
      gaps[j] = std::pow(coupled_gap(cfg, sheet, {pr[0], pr[1]}), p);
    }
    double sum = 0.0, comp = 0.0;
    for (double g : gaps) {  // compensated, fixed order
      const double y = g - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    const double mean = sum / M;
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    const double half = 1.96 * std::sqrt(var / (M - 1)) / std::sqrt(static_cast<double>(M));
    table.rows.push_back({std::to_string(pr[0]), std::to_string(pr[1]), format_double(mean),
                          format_double(mean - half), format_double(mean + half),
                          std::to_string(M), std::to_string(seed)});
  }
  return table;
}

// ---- moment_study -----------------------------------------------------------

ResultTable moment_study(const nlohmann::json& params) {
  require_seed(params, "moment_study");
  const SpdePreset preset = spde_preset(params.value("preset", "nualart_pardoux"));
  auto n_list = params.value("n_list", std::vector<int>{8, 16, 32});
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw ConfigError("moment_study: n_list must be ascending");
  const int M = params.value("M", 200);
  const double p = params.value("p", 2.0);
  const double dt = params.value("dt", 1e-4);
  const double T = params.value("T", 0.25);
  const std::uint64_t seed = params.value("seed", 42ULL);

  ResultTable table;
  table.columns = {"resolution", "estimate", "ci_low", "ci_high", "M", "seed"};
  for (int n : n_list) {
    SimulationConfig cfg{GridSpec(n), dt, T, preset.u0, seed, preset.coefficients, false};
    MomentEstimate est = moment_estimate(cfg, p, M);
    table.rows.push_back({std::to_string(n), format_double(est.estimate),
                          format_double(est.ci_low), format_double(est.ci_high),
                          std::to_string(M), std::to_string(seed)});
  }
  return table;
}

std::vector<std::string> statistical_columns(const std::string& kind) {
  if (kind == "property_suite") return {"value"};
  if (kind == "spde_convergence") return {"mean_gap_p", "ci_low", "ci_high"};
  if (kind == "moment_study") return {"estimate", "ci_low", "ci_high"};
  return {};
}

fs::path resolve_output_dir(const nlohmann::json& config) {
  std::string dir = config.value("output_dir", std::string("rspde_out"));
  fs::path path(dir);
  if (const char* root = std::getenv("RSPDE_OUTPUT_ROOT"); root && path.is_relative())
    path = fs::path(root) / path;
  return path;
}

}  // namespace

RunOutcome run_experiment(const nlohmann::json& config) {
  RunOutcome outcome;
  std::string kind;
  nlohmann::json params;
  try {
    kind = config.at("kind").get<std::string>();
    params = config.value("parameters", nlohmann::json::object());
  } catch (const std::exception& e) {
    outcome.exit_code = 1;
    outcome.messages.push_back(std::string("config error: ") + e.what());
    return outcome;
  }

  ResultTable table;
  nlohmann::json extra = nlohmann::json::object();
  bool violation = false;
  const auto started = std::chrono::steady_clock::now();
  try {
    if (kind == "property_suite") {
      bool all_pass = true;
      table = property_suite(params, all_pass);
      violation = !all_pass;
    } else if (kind == "obstacle_convergence") {
      table = obstacle_convergence(params, extra);
    } else if (kind == "spde_convergence") {
      table = spde_convergence(params);
    } else if (kind == "moment_study") {
      table = moment_study(params);
    } else {
      throw ConfigError("unknown experiment kind: " + kind);
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = 1;
    outcome.messages.push_back(std::string("config error: ") + e.what());
    return outcome;
  } catch (const std::exception& e) {
    outcome.exit_code = 1;
    outcome.messages.push_back(std::string("error: ") + e.what());
    return outcome;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const fs::path dir = resolve_output_dir(config);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "results.csv", std::ios::binary);
    os << table.to_csv();
  }
  nlohmann::json manifest{
      {"kind", kind},
      {"version", kVersion},
      {"config", config},
      {"columns", table.columns},
      {"statistical_columns", statistical_columns(kind)},
      {"timings", {{"wall_time_s", wall}}},
  };
  if (params.contains("seed")) manifest["seed"] = params.at("seed");
  for (auto& [key, value] : extra.items()) manifest[key] = value;
  {
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << "\n";
  }

  outcome.output_dir = dir.string();
  outcome.exit_code = violation ? 2 : 0;
  if (violation) outcome.messages.push_back("property suite reported violations, see results.csv");
  return outcome;
}

RunOutcome run_experiment_file(const std::string& config_path) {
  std::ifstream is(config_path);
  if (!is) return {1, "", {"config error: cannot open " + config_path}};
  nlohmann::json config;
  try {
    is >> config;
  } catch (const std::exception& e) {
    return {1, "", {std::string("config error: invalid JSON: ") + e.what()}};
  }
  return run_experiment(config);
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open " + file.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// experiment identity: the config minus the seed and the output location
nlohmann::json strip_seed(nlohmann::json config) {
  if (config.contains("parameters") && config["parameters"].contains("seed"))
    config["parameters"].erase("seed");
  config.erase("output_dir");
  return config;
}

}  // namespace

CompareOutcome compare_runs(const std::string& dir1, const std::string& dir2) {
  CompareOutcome out;
  nlohmann::json m1, m2;
  try {
    std::ifstream i1(fs::path(dir1) / "manifest.json"), i2(fs::path(dir2) / "manifest.json");
    if (!i1 || !i2) throw ConfigError("manifest.json missing");
    i1 >> m1;
    i2 >> m2;
  } catch (const std::exception& e) {
    return {1, {std::string("error: ") + e.what()}};
  }

  if (m1.value("kind", "") != m2.value("kind", "") || m1.at("columns") != m2.at("columns")) {
    return {1, {"schema mismatch: kind or columns differ"}};
  }

  std::vector<std::vector<std::string>> c1, c2;
  try {
    c1 = read_csv(fs::path(dir1) / "results.csv");
    c2 = read_csv(fs::path(dir2) / "results.csv");
  } catch (const std::exception& e) {
    return {1, {std::string("error: ") + e.what()}};
  }
  if (c1.size() != c2.size() || c1.empty() || c1[0] != c2[0])
    return {1, {"schema mismatch: row count or header differs"}};

  const bool same_config = strip_seed(m1.at("config")) == strip_seed(m2.at("config"));
  const bool same_seed = m1.value("seed", nlohmann::json()) == m2.value("seed", nlohmann::json());
  const bool seed_only_diff = same_config && !same_seed;

  std::vector<std::string> stat_cols = m1.value("statistical_columns", std::vector<std::string>{});
  const auto& header = c1[0];
  int mismatches = 0, flagged = 0;
  for (size_t r = 1; r < c1.size(); ++r) {
    for (size_t c = 0; c < header.size(); ++c) {
      if (c1[r][c] == c2[r][c]) continue;
      const bool statistical =
          header[c] == "seed" ||
          std::find(stat_cols.begin(), stat_cols.end(), header[c]) != stat_cols.end();
      if (seed_only_diff && statistical) {
        ++flagged;
        out.report.push_back("seed-flagged statistical diff at row " + std::to_string(r) +
                             " column " + header[c] + ": " + c1[r][c] + " vs " + c2[r][c]);
      } else {
        ++mismatches;
        out.report.push_back("mismatch at row " + std::to_string(r) + " column " + header[c] +
                             ": " + c1[r][c] + " vs " + c2[r][c]);
      }
    }
  }
  if (mismatches == 0 && flagged == 0) out.report.push_back("empty diff");
  out.exit_code = mismatches > 0 ? 2 : 0;
  return out;
}

}  // namespace rspde
