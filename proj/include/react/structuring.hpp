// Filters raw scenario inputs into the validated, temporally trimmed
// context package consumed by prompt encoding.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "react/types.hpp"

namespace react {

struct ValidationConfig {
  double delta_t_max{2.0};     // max |t_h - t_now| for a fresh alert
  double history_window_s{2.0};
  int nav_horizon{6};          // waypoints kept beyond the current one

  bool valid() const { return delta_t_max > 0.0 && history_window_s > 0.0 && nav_horizon >= 0; }
};

// Symbolic planning context at one decision time: validated hazard (if
// any), the short navigation horizon, and the recent ego history.
struct ContextPackage {
  std::optional<HazardAlert> hazard;
  std::vector<Vec3> nav_eff;
  std::vector<VehicleState> ego_history;
  double t_now{0.0};
  double dt{0.1};
};

// Keeps an alert only if the route extends past the hazard longitudinally
// and the alert timestamp is within delta_t_max of now.
inline std::optional<HazardAlert> validate_hazard(const HazardAlert& h, const NavigationPlan& nav,
                                                  double t_now, const ValidationConfig& cfg) {
  if (nav.waypoints.empty()) {
    throw std::invalid_argument("validate_hazard: empty navigation plan");
  }
  const bool on_route = nav.waypoints.back().x > h.x;
  const bool fresh = std::abs(h.t_h - t_now) < cfg.delta_t_max;
  if (on_route && fresh) {
    return h;
  }
  return std::nullopt;
}

// Waypoints at indices {current, ..., current + nav_horizon}, clipped to
// the list end.
inline std::vector<Vec3> filter_navigation(const NavigationPlan& nav,
                                           const ValidationConfig& cfg) {
  if (nav.current_index >= nav.waypoints.size()) {
    throw std::invalid_argument("filter_navigation: current_index out of bounds");
  }
  const std::size_t last =
      std::min(nav.waypoints.size() - 1, nav.current_index + static_cast<std::size_t>(cfg.nav_horizon));
  return {nav.waypoints.begin() + static_cast<std::ptrdiff_t>(nav.current_index),
          nav.waypoints.begin() + static_cast<std::ptrdiff_t>(last + 1)};
}

// States whose timestamp falls in the closed window [t_now - K, t_now].
inline std::vector<VehicleState> filter_ego_history(const std::vector<VehicleState>& states,
                                                    double t_now, double dt,
                                                    const ValidationConfig& cfg) {
  std::vector<VehicleState> out;
  const double lo = t_now - cfg.history_window_s;
  for (const VehicleState& s : states) {
    const double t = state_time(s, dt);
    if (t >= lo && t <= t_now) {
      out.push_back(s);
    }
  }
  return out;
}

inline ContextPackage build_context(const Scenario& scenario, double t_now,
                                    const ValidationConfig& cfg) {
  ContextPackage ctx;
  ctx.t_now = t_now;
  ctx.dt = scenario.dt;
  if (scenario.hazard) {
    ctx.hazard = validate_hazard(*scenario.hazard, scenario.nav, t_now, cfg);
  }
  ctx.nav_eff = filter_navigation(scenario.nav, cfg);
  ctx.ego_history = filter_ego_history(scenario.ego_track(), t_now, scenario.dt, cfg);
  return ctx;
}

}  // namespace react
