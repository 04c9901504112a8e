// Flat key-value harness configuration ("key = value" lines, # comments).
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "react/bev.hpp"
#include "react/planner.hpp"
#include "react/structuring.hpp"

namespace react {

struct HarnessConfig {
  ValidationConfig validation;
  GridSpec grid;
  double overlay_kappa_m{5.0};
  int pool_factor{1};
  int patch_size{8};
  int token_budget{1600};
  BackendConfig backend;
  std::string instruction{
      "You are a trajectory co-pilot. Given the hazard alert, the navigation waypoints, and the "
      "recent ego states below, plus the current and previous occupancy maps, output residual "
      "corrections as a JSON array of [dx, dy] pairs, one per waypoint, that keeps the vehicle "
      "at least 5 m clear of every hazard and agent while staying close to the nominal route."};
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) {
    return "";
  }
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline void apply_config_entry(HarnessConfig& cfg, const std::string& key,
                               const std::string& value) {
  auto as_double = [&]() { return std::stod(value); };
  auto as_int = [&]() { return std::stoi(value); };
  if (key == "delta_t_max") {
    cfg.validation.delta_t_max = as_double();
  } else if (key == "history_window_s") {
    cfg.validation.history_window_s = as_double();
  } else if (key == "nav_horizon") {
    cfg.validation.nav_horizon = as_int();
  } else if (key == "grid_width") {
    cfg.grid.width = as_int();
  } else if (key == "grid_height") {
    cfg.grid.height = as_int();
  } else if (key == "grid_scale") {
    cfg.grid.scale = as_double();
  } else if (key == "grid_anchor_u") {
    cfg.grid.anchor_u = as_int();
  } else if (key == "grid_anchor_v") {
    cfg.grid.anchor_v = as_int();
  } else if (key == "overlay_kappa") {
    cfg.overlay_kappa_m = as_double();
  } else if (key == "pool_factor") {
    cfg.pool_factor = as_int();
  } else if (key == "patch_size") {
    cfg.patch_size = as_int();
  } else if (key == "token_budget") {
    cfg.token_budget = as_int();
  } else if (key == "backend") {
    cfg.backend.kind = backend_kind_from_string(value);
  } else if (key == "endpoint") {
    cfg.backend.endpoint = value;
  } else if (key == "timeout_s") {
    cfg.backend.timeout_s = as_double();
  } else if (key == "max_lateral_offset") {
    cfg.backend.max_lateral_offset = as_double();
  } else if (key == "lateral_step") {
    cfg.backend.lateral_step = as_double();
  } else if (key == "safety_clearance") {
    cfg.backend.safety_clearance = as_double();
  } else if (key == "max_new_tokens") {
    cfg.backend.max_new_tokens = as_int();
  } else if (key == "instruction") {
    cfg.instruction = value;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

inline HarnessConfig parse_config(std::istream& in) {
  HarnessConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not 'key = value'");
    }
    apply_config_entry(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline HarnessConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::runtime_error("load_config: cannot open " + path);
  }
  return parse_config(f);
}

}  // namespace react
