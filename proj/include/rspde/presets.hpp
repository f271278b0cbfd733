#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rspde/obstacle.hpp"
#include "rspde/spde.hpp"

#include <json.hpp>

namespace rspde {

struct SpdePreset {
  std::string name;
  std::string description;
  Coefficients coefficients;
  std::function<double(double)> u0;
};

SpdePreset spde_preset(const std::string& name);
ObstacleInstance obstacle_preset(const std::string& name);

std::vector<std::pair<std::string, std::string>> list_spde_presets();
std::vector<std::pair<std::string, std::string>> list_obstacle_presets();

// Tabulated obstacle: {"t": [...], "x": [...], "values": [... row-major t x x ...]},
// evaluated by bilinear interpolation; the horizon is t.back().
ObstacleInstance obstacle_from_json(const nlohmann::json& table);

}  // namespace rspde
