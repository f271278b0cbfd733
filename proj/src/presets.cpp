#include "rspde/presets.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace rspde {

namespace {

double clamp10(double u) { return std::clamp(u, -10.0, 10.0); }

// fixed piecewise-linear zigzag, 4 teeth over [0,1], range [-1,1]
double zigzag(double x) {
  const double s = 4.0 * x - std::floor(4.0 * x);
  return 2.0 * (2.0 * std::abs(s - 0.5)) - 1.0;
}

}  // namespace

SpdePreset spde_preset(const std::string& name) {
  if (name == "heat_decay") {
    Coefficients c{[](double, double, double) { return 0.0; },
                   [](double, double, double) { return 0.0; }, 0.0, 0.0};
    return {name, "deterministic heat flow, u0 = sin(pi x), sigma = 0, f = 0", c,
            [](double x) { return std::sin(M_PI * x); }};
  }
  if (name == "nualart_pardoux") {
    Coefficients c{[](double, double, double) { return 0.0; },
                   [](double, double, double) { return 1.0; }, 0.0, 0.0};
    return {name, "additive noise, sigma = 1, f = 0, u0 = 0", c, [](double) { return 0.0; }};
  }
  if (name == "lipschitz_demo") {
    Coefficients c{[](double, double, double u) {
                     const double w = clamp10(u);
                     return 0.5 * w * (1.0 - w);
                   },
                   [](double, double, double u) { return 0.2 * std::min(1.0 + std::abs(u), 10.0); },
                   10.5, 55.0};
    return {name, "Lipschitz drift/noise pair, u0 = sin(pi x)", c,
            [](double x) { return std::sin(M_PI * x); }};
  }
  throw ConfigError("unknown coefficient preset: " + name);
}

ObstacleInstance obstacle_preset(const std::string& name) {
  if (name == "obstacle_positive")
    return {[](double, double x) { return std::sin(M_PI * x); }, 0.5, Smoothness::C12};
  // The profile mixes the first two sine modes: a pure sin(pi x) obstacle is
  // an eigenvector of every lattice, each resolution then tracks the binding
  // boundary exactly and a convergence study would read identically zero.
  if (name == "obstacle_sign_change")
    return {[](double t, double x) {
              return (1.0 - 2.0 * t) * (std::sin(M_PI * x) + 0.3 * std::sin(2.0 * M_PI * x));
            },
            1.0, Smoothness::C12};
  if (name == "obstacle_zigzag")
    return {[](double t, double x) {
              return (1.0 - 2.0 * t) * std::sin(M_PI * x) * (1.0 + 0.3 * zigzag(x));
            },
            1.0, Smoothness::C0};
  throw ConfigError("unknown obstacle preset: " + name);
}

std::vector<std::pair<std::string, std::string>> list_spde_presets() {
  return {
      {"heat_decay", spde_preset("heat_decay").description},
      {"nualart_pardoux", spde_preset("nualart_pardoux").description},
      {"lipschitz_demo", spde_preset("lipschitz_demo").description},
  };
}

std::vector<std::pair<std::string, std::string>> list_obstacle_presets() {
  return {
      {"obstacle_positive", "strictly positive obstacle at the interior nodes (zero solution)"},
      {"obstacle_sign_change", "(1-2t)(sin(pi x)+0.3 sin(2 pi x)), reflection active after t = 1/2"},
      {"obstacle_zigzag", "sign-changing obstacle with a piecewise-linear spatial zigzag"},
  };
}

ObstacleInstance obstacle_from_json(const nlohmann::json& table) {
  if (!table.contains("t") || !table.contains("x") || !table.contains("values"))
    throw ConfigError("tabulated obstacle needs t, x and values");
  auto t = table.at("t").get<std::vector<double>>();
  auto x = table.at("x").get<std::vector<double>>();
  auto values = table.at("values").get<std::vector<double>>();
  if (t.size() < 2 || x.size() < 2 || values.size() != t.size() * x.size())
    throw ConfigError("tabulated obstacle: values must be |t| x |x| row-major");
  if (!std::is_sorted(t.begin(), t.end()) || !std::is_sorted(x.begin(), x.end()))
    throw ConfigError("tabulated obstacle: grids must be ascending");

  struct Table {
    std::vector<double> t, x, v;
  };
  auto data = std::make_shared<Table>(Table{std::move(t), std::move(x), std::move(values)});
  auto locate = [](const std::vector<double>& grid, double p) {
    const auto it = std::upper_bound(grid.begin(), grid.end(), p);
    const size_t hi = std::clamp<size_t>(it - grid.begin(), 1, grid.size() - 1);
    return hi - 1;
  };
  auto eval = [data, locate](double tt, double xx) {
    const auto& g = *data;
    const size_t i = locate(g.t, tt), j = locate(g.x, xx);
    const double wt = std::clamp((tt - g.t[i]) / (g.t[i + 1] - g.t[i]), 0.0, 1.0);
    const double wx = std::clamp((xx - g.x[j]) / (g.x[j + 1] - g.x[j]), 0.0, 1.0);
    const size_t cols = g.x.size();
    const double a = g.v[i * cols + j], b = g.v[i * cols + j + 1];
    const double c = g.v[(i + 1) * cols + j], d = g.v[(i + 1) * cols + j + 1];
    return (1.0 - wt) * ((1.0 - wx) * a + wx * b) + wt * ((1.0 - wx) * c + wx * d);
  };
  return ObstacleInstance{eval, data->t.back(), Smoothness::C0};
}

}  // namespace rspde
