#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rspde/noise.hpp"

using namespace rspde;

TEST_CASE("cell statistics") {
  const int n_fine = 16, steps = 6250;  // 1e5 cells
  const double dt = 1e-3;
  auto sheet = SheetIncrements::sample(n_fine, dt, steps, 314159);
  const double cell_var = dt / n_fine;

  double sum = 0.0, sumsq = 0.0;
  const long count = static_cast<long>(steps) * n_fine;
  for (int i = 0; i < steps; ++i)
    for (int c = 0; c < n_fine; ++c) {
      const double v = sheet.cell(i, c);
      sum += v;
      sumsq += v * v;
    }
  const double mean = sum / count;
  const double var = sumsq / count - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(cell_var / count));
  CHECK(var == doctest::Approx(cell_var).epsilon(0.05));
}

TEST_CASE("determinism and streaming") {
  auto a = SheetIncrements::sample(8, 1e-3, 50, 99);
  auto b = SheetIncrements::sample(8, 1e-3, 50, 99);
  for (int i = 0; i < 50; ++i)
    for (int c = 0; c < 8; ++c) CHECK(a.cell(i, c) == b.cell(i, c));

  auto other = SheetIncrements::sample(8, 1e-3, 50, 100);
  int differing = 0;
  for (int i = 0; i < 50; ++i)
    for (int c = 0; c < 8; ++c) differing += (a.cell(i, c) != other.cell(i, c));
  CHECK(differing == 400);
}

TEST_CASE("coarsening") {
  auto sheet = SheetIncrements::sample(32, 1e-3, 200, 7);

  SUBCASE("identity at the fine resolution") {
    LatticeDriver driver = coarsen(sheet, 32);
    const double root = std::sqrt(32.0);
    for (int i = 0; i < 20; ++i)
      for (int k = 1; k < 32; ++k) CHECK(driver.increment(i, k) == root * sheet.cell(i, k));
  }
  SUBCASE("pairwise refinement identity is bit-exact") {
    for (int n : {4, 8, 16}) {
      LatticeDriver driver = coarsen(sheet, n);
      const double root = std::sqrt(static_cast<double>(n));
      for (int i = 0; i < 50; ++i)
        for (int k = 1; k < n; ++k) {
          CHECK(sheet.mass(i, n, k) == sheet.mass(i, 2 * n, 2 * k) + sheet.mass(i, 2 * n, 2 * k + 1));
          CHECK(driver.increment(i, k) ==
                root * (sheet.mass(i, 2 * n, 2 * k) + sheet.mass(i, 2 * n, 2 * k + 1)));
        }
    }
  }
  SUBCASE("driver variance is dt") {
    auto big = SheetIncrements::sample(32, 1e-3, 5000, 11);
    LatticeDriver driver = coarsen(big, 8);
    for (int k = 1; k < 8; ++k) {
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < 5000; ++i) {
        const double v = driver.increment(i, k);
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / 5000;
      CHECK(sumsq / 5000 - mean * mean == doctest::Approx(1e-3).epsilon(0.05));
    }
  }
  SUBCASE("drivers within a step are uncorrelated") {
    auto big = SheetIncrements::sample(8, 1e-3, 4000, 23);
    LatticeDriver driver = coarsen(big, 4);
    for (int k = 1; k < 4; ++k)
      for (int l = k + 1; l < 4; ++l) {
        double acc = 0.0;
        for (int i = 0; i < 4000; ++i) acc += driver.increment(i, k) * driver.increment(i, l);
        const double corr = acc / 4000 / 1e-3;  // normalized by the variance
        CHECK(std::abs(corr) < 4.0 / std::sqrt(4000.0));
      }
  }
  SUBCASE("non-divisor resolution rejected") { CHECK_THROWS_AS(coarsen(sheet, 5), ConfigError); }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(SheetIncrements::sample(1, 1e-3, 10, 0), ConfigError);
  CHECK_THROWS_AS(SheetIncrements::sample(8, -1e-3, 10, 0), ConfigError);
  CHECK_THROWS_AS(SheetIncrements::sample(8, 1e-3, 0, 0), ConfigError);
  auto sheet = SheetIncrements::sample(8, 1e-3, 10, 0);
  CHECK_THROWS_AS(sheet.cell(10, 0), IndexError);
  CHECK_THROWS_AS(sheet.cell(0, 8), IndexError);
}

TEST_CASE("binary dump round-trips") {
  auto sheet = SheetIncrements::sample(4, 2e-3, 25, 4242);
  std::stringstream buffer;
  dump_sheet(sheet, buffer);
  SheetDump dump = load_sheet(buffer);
  CHECK(dump.n_fine == 4);
  CHECK(dump.dt == 2e-3);
  CHECK(dump.steps == 25);
  CHECK(dump.seed == 4242);
  for (int i = 0; i < 25; ++i)
    for (int c = 0; c < 4; ++c) CHECK(dump.cells[i * 4 + c] == sheet.cell(i, c));

  std::stringstream truncated(buffer.str().substr(0, 16));
  CHECK_THROWS_AS(load_sheet(truncated), ConfigError);
}
