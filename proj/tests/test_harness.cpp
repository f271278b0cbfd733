#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rspde/harness.hpp"

using namespace rspde;
namespace fs = std::filesystem;

namespace {

fs::path sandbox() {
  const fs::path dir = fs::temp_directory_path() / "rspde_harness_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::json small_suite_config(const std::string& out, std::uint64_t seed = 1) {
  return nlohmann::json{{"kind", "property_suite"},
                        {"output_dir", out},
                        {"parameters",
                         {{"n_max", 8}, {"vectors", 200}, {"pairs", 3}, {"dt", 1e-3}, {"T", 0.2},
                          {"seed", seed}}}};
}

nlohmann::json small_spde_config(const std::string& out, std::uint64_t seed, double dt = 1e-3) {
  return nlohmann::json{
      {"kind", "spde_convergence"},
      {"output_dir", out},
      {"parameters",
       {{"preset", "nualart_pardoux"}, {"pairs", nlohmann::json::array({{4, 8}})}, {"M", 10},
        {"p", 2.0}, {"dt", dt}, {"T", 0.1}, {"seed", seed}}}};
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 2.2250738585072014e-308}) {
    CHECK(std::stod(format_double(v)) == v);
    CHECK(std::stod(format_double(-v)) == -v);
  }
}

TEST_CASE("property suite runs clean and writes artifacts") {
  const fs::path dir = sandbox() / "suite";
  fs::remove_all(dir);
  RunOutcome outcome = run_experiment(small_suite_config(dir.string()));
  CHECK(outcome.exit_code == 0);
  REQUIRE(fs::exists(dir / "results.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));

  std::ifstream is(dir / "results.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "check,n,value,threshold,pass,seed");
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.find(",1,") != std::string::npos);  // pass column before seed
  }
  CHECK(rows > 10);

  nlohmann::json manifest;
  std::ifstream(dir / "manifest.json") >> manifest;
  CHECK(manifest.at("kind") == "property_suite");
  CHECK(manifest.at("version") == kVersion);
  CHECK(manifest.at("seed") == 1);
}

TEST_CASE("obstacle convergence run") {
  const fs::path dir = sandbox() / "obstacle";
  fs::remove_all(dir);
  nlohmann::json config{{"kind", "obstacle_convergence"},
                        {"output_dir", dir.string()},
                        {"parameters",
                         {{"preset", "obstacle_positive"}, {"n_list", {4, 8, 16}}, {"ref_n", 32},
                          {"dt", 2e-3}}}};
  RunOutcome outcome = run_experiment(config);
  CHECK(outcome.exit_code == 0);
  std::ifstream is(dir / "results.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "resolution,gap");
  while (std::getline(is, line)) {
    const double gap = std::stod(line.substr(line.find(',') + 1));
    CHECK(gap <= 1e-10);
  }
  nlohmann::json manifest;
  std::ifstream(dir / "manifest.json") >> manifest;
  CHECK(manifest.at("reference") == 32);
}

TEST_CASE("deterministic rerun is byte-identical") {
  const fs::path d1 = sandbox() / "spde1", d2 = sandbox() / "spde2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  CHECK(run_experiment(small_spde_config(d1.string(), 42)).exit_code == 0);
  CHECK(run_experiment(small_spde_config(d2.string(), 42)).exit_code == 0);
  CHECK(slurp(d1 / "results.csv") == slurp(d2 / "results.csv"));
  CHECK(!slurp(d1 / "results.csv").empty());
}

TEST_CASE("compare_runs") {
  const fs::path base = sandbox();
  const fs::path d1 = base / "cmp1", d2 = base / "cmp2", d3 = base / "cmp3", d4 = base / "cmp4";
  for (const auto& d : {d1, d2, d3, d4}) fs::remove_all(d);
  REQUIRE(run_experiment(small_spde_config(d1.string(), 42)).exit_code == 0);
  REQUIRE(run_experiment(small_spde_config(d2.string(), 42)).exit_code == 0);
  REQUIRE(run_experiment(small_spde_config(d3.string(), 43)).exit_code == 0);
  REQUIRE(run_experiment(small_spde_config(d4.string(), 42, 5e-4)).exit_code == 0);

  SUBCASE("identical runs give an empty diff") {
    CompareOutcome out = compare_runs(d1.string(), d2.string());
    CHECK(out.exit_code == 0);
    REQUIRE(out.report.size() == 1);
    CHECK(out.report[0] == "empty diff");
  }
  SUBCASE("seed change is flagged but accepted") {
    CompareOutcome out = compare_runs(d1.string(), d3.string());
    CHECK(out.exit_code == 0);
    bool flagged = false;
    for (const auto& line : out.report) flagged = flagged || line.find("seed-flagged") == 0;
    CHECK(flagged);
  }
  SUBCASE("perturbed dt fails the comparison") {
    CompareOutcome out = compare_runs(d1.string(), d4.string());
    CHECK(out.exit_code == 2);
    bool mismatch = false;
    for (const auto& line : out.report) mismatch = mismatch || line.find("mismatch") == 0;
    CHECK(mismatch);
  }
  SUBCASE("schema mismatch is a structured error") {
    const fs::path suite = base / "cmp_suite";
    fs::remove_all(suite);
    REQUIRE(run_experiment(small_suite_config(suite.string())).exit_code == 0);
    CompareOutcome out = compare_runs(d1.string(), suite.string());
    CHECK(out.exit_code == 1);
  }
  SUBCASE("missing manifest") {
    CompareOutcome out = compare_runs(d1.string(), (base / "nope").string());
    CHECK(out.exit_code == 1);
  }
}

TEST_CASE("rows are reproducible from the manifest alone") {
  const fs::path d1 = sandbox() / "repro1", d2 = sandbox() / "repro2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  REQUIRE(run_experiment(small_spde_config(d1.string(), 7)).exit_code == 0);
  nlohmann::json manifest;
  std::ifstream(d1 / "manifest.json") >> manifest;
  nlohmann::json config = manifest.at("config");
  config["output_dir"] = d2.string();
  REQUIRE(run_experiment(config).exit_code == 0);
  CHECK(slurp(d1 / "results.csv") == slurp(d2 / "results.csv"));
}

TEST_CASE("property violations exit with code 2") {
  const fs::path dir = sandbox() / "violation";
  fs::remove_all(dir);
  nlohmann::json config = small_suite_config(dir.string());
  config["parameters"]["orthant_tol"] = -1.0;  // unsatisfiable threshold
  RunOutcome outcome = run_experiment(config);
  CHECK(outcome.exit_code == 2);
  CHECK(fs::exists(dir / "results.csv"));  // artifacts still written for inspection
  std::ifstream is(dir / "results.csv");
  std::string line;
  std::getline(is, line);
  bool found_failing_row = false;
  while (std::getline(is, line))
    if (line.rfind("orthant_sign", 0) == 0 && line.find(",0,") != std::string::npos)
      found_failing_row = true;
  CHECK(found_failing_row);
}

TEST_CASE("tabulated obstacle runs through the harness") {
  const fs::path dir = sandbox() / "tabulated";
  fs::remove_all(dir);
  // coarse table of (1-2t) x (1-x), horizon 1
  nlohmann::json table;
  std::vector<double> ts, xs;
  for (int i = 0; i <= 10; ++i) ts.push_back(i / 10.0);
  for (int j = 0; j <= 20; ++j) xs.push_back(j / 20.0);
  std::vector<double> values;
  for (double t : ts)
    for (double x : xs) values.push_back((1.0 - 2.0 * t) * x * (1.0 - x));
  table["t"] = ts;
  table["x"] = xs;
  table["values"] = values;

  nlohmann::json config{{"kind", "obstacle_convergence"},
                        {"output_dir", dir.string()},
                        {"parameters",
                         {{"obstacle", table}, {"n_list", {4, 8, 16}}, {"ref_n", 32}, {"dt", 2e-3}}}};
  RunOutcome outcome = run_experiment(config);
  CHECK(outcome.exit_code == 0);
  CHECK(fs::exists(dir / "results.csv"));
}

TEST_CASE("config errors exit with code 1") {
  CHECK(run_experiment(nlohmann::json{{"kind", "unheard_of"}}).exit_code == 1);
  CHECK(run_experiment(nlohmann::json{{"no_kind", 1}}).exit_code == 1);
  CHECK(run_experiment_file("/does/not/exist.json").exit_code == 1);

  nlohmann::json bad = small_spde_config((sandbox() / "bad").string(), 1);
  bad["parameters"]["preset"] = "missing_preset";
  CHECK(run_experiment(bad).exit_code == 1);

  nlohmann::json seedless = small_spde_config((sandbox() / "seedless").string(), 1);
  seedless["parameters"].erase("seed");
  CHECK(run_experiment(seedless).exit_code == 1);

  nlohmann::json unsorted{{"kind", "moment_study"},
                          {"output_dir", (sandbox() / "unsorted").string()},
                          {"parameters",
                           {{"preset", "nualart_pardoux"}, {"n_list", {16, 8}}, {"M", 10},
                            {"p", 2.0}, {"dt", 1e-3}, {"T", 0.05}, {"seed", 1}}}};
  CHECK(run_experiment(unsorted).exit_code == 1);
}

TEST_CASE("output root override") {
  const fs::path root = sandbox() / "rooted";
  fs::remove_all(root);
  setenv("RSPDE_OUTPUT_ROOT", root.string().c_str(), 1);
  nlohmann::json config = small_suite_config("rel_dir");
  RunOutcome outcome = run_experiment(config);
  unsetenv("RSPDE_OUTPUT_ROOT");
  CHECK(outcome.exit_code == 0);
  CHECK(fs::exists(root / "rel_dir" / "results.csv"));
}
