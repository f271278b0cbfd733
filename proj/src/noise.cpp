#include "rspde/noise.hpp"

#include <cmath>
#include <istream>
#include <ostream>

namespace rspde {

SheetIncrements SheetIncrements::sample(int n_fine, double dt, int steps, std::uint64_t seed) {
  if (n_fine < 2) throw ConfigError("SheetIncrements: n_fine must be >= 2");
  if (dt <= 0.0 || steps < 1) throw ConfigError("SheetIncrements: dt and steps must be positive");
  return SheetIncrements{n_fine, dt, steps, seed};
}

double SheetIncrements::normal(int step, int cell) const {
  using detail::mix64;
  std::uint64_t h = mix64(seed);
  h = mix64(h + static_cast<std::uint64_t>(step));
  h = mix64(h + static_cast<std::uint64_t>(cell));
  const std::uint64_t a = h;
  const std::uint64_t b = mix64(h);
  const double u1 = ((a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = (b >> 11) * 0x1.0p-53;          // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double SheetIncrements::cell(int step, int c) const {
  if (step < 0 || step >= steps || c < 0 || c >= n_fine)
    throw IndexError("SheetIncrements: cell index out of range");
  return normal(step, c) * std::sqrt(dt / n_fine);
}

double SheetIncrements::mass(int step, int n, int k) const {
  if (n < 1 || n_fine % n != 0) throw ConfigError("SheetIncrements: n must divide n_fine");
  if (n == n_fine) return cell(step, k);
  if ((n_fine / n) % 2 == 0) return mass(step, 2 * n, 2 * k) + mass(step, 2 * n, 2 * k + 1);
  const int r = n_fine / n;
  double acc = 0.0;
  for (int c = k * r; c < (k + 1) * r; ++c) acc += cell(step, c);
  return acc;
}

LatticeDriver coarsen(const SheetIncrements& sheet, int n) {
  if (n < 2 || sheet.n_fine % n != 0)
    throw ConfigError("coarsen: target resolution must divide n_fine");
  LatticeDriver driver(GridSpec(n), sheet.dt, sheet.steps);
  driver.seed = sheet.seed;
  driver.source_n_fine = sheet.n_fine;
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < sheet.steps; ++i)
    for (int k = 1; k < n; ++k) driver.increment(i, k) = root_n * sheet.mass(i, n, k);
  return driver;
}

void dump_sheet(const SheetIncrements& sheet, std::ostream& os) {
  auto put_u64 = [&os](std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); };
  auto put_f64 = [&os](double v) { os.write(reinterpret_cast<const char*>(&v), 8); };
  put_u64(static_cast<std::uint64_t>(sheet.n_fine));
  put_f64(sheet.dt);
  put_u64(static_cast<std::uint64_t>(sheet.steps));
  put_u64(sheet.seed);
  for (int i = 0; i < sheet.steps; ++i)
    for (int c = 0; c < sheet.n_fine; ++c) put_f64(sheet.cell(i, c));
}

SheetDump load_sheet(std::istream& is) {
  SheetDump dump;
  auto get_u64 = [&is]() {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  auto get_f64 = [&is]() {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  dump.n_fine = get_u64();
  dump.dt = get_f64();
  dump.steps = get_u64();
  dump.seed = get_u64();
  if (!is) throw ConfigError("load_sheet: truncated header");
  dump.cells.resize(dump.steps * dump.n_fine);
  for (auto& c : dump.cells) c = get_f64();
  if (!is) throw ConfigError("load_sheet: truncated payload");
  return dump;
}

}  // namespace rspde
