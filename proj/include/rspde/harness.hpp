#pragma once

#include <random>
#include <string>
#include <vector>

#include "rspde/obstacle.hpp"
#include "rspde/presets.hpp"
#include "rspde/spde.hpp"

#include <json.hpp>

namespace rspde {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits, enough for exact double round-trips.
std::string format_double(double v);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 config error, 2 property violation
  std::string output_dir;
  std::vector<std::string> messages;
};

// Executes one experiment config (kind + parameters) and writes results.csv
// and manifest.json into the output directory. The RSPDE_OUTPUT_ROOT
// environment variable, when set, re-roots relative output paths.
RunOutcome run_experiment(const nlohmann::json& config);
RunOutcome run_experiment_file(const std::string& config_path);

struct CompareOutcome {
  int exit_code = 0;  // 0 match/expected variation, 1 schema or config error, 2 mismatch
  std::vector<std::string> report;
};

// Column-wise diff of two run directories. Statistical columns are exempt
// (and flagged) when the two runs differ only in their seed.
CompareOutcome compare_runs(const std::string& dir1, const std::string& dir2);

// Independent piecewise-linear random paths per component, positive at t = 0;
// shared by the property suite and the verification tests.
BoundaryPath random_boundary_path(const GridSpec& grid, double dt, int steps, int kinks,
                                  double amplitude, std::mt19937_64& rng);

}  // namespace rspde
