// Discrete-time constant-velocity kinematics on the shared timestep grid.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "react/types.hpp"

namespace react {

// Wraps an angle to (-pi, pi].
inline double normalize_yaw(double psi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(psi, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  } else if (wrapped > std::numbers::pi) {
    wrapped -= two_pi;
  }
  return wrapped;
}

// One step: positions advance by velocity, altitude and velocities hold,
// yaw integrates the given rate.
inline VehicleState propagate_state(const VehicleState& s, double yaw_rate, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("propagate_state: dt must be positive and finite");
  }
  if (!s.finite() || !std::isfinite(yaw_rate)) {
    throw std::invalid_argument("propagate_state: non-finite vehicle state");
  }
  VehicleState next = s;
  next.x = s.x + s.vx * dt;
  next.y = s.y + s.vy * dt;
  next.z = s.z;
  next.yaw = normalize_yaw(s.yaw + yaw_rate * dt);
  next.k = s.k + 1;
  return next;
}

// Chains propagate_state over the given yaw-rate schedule. The result has
// yaw_rates.size() + 1 points and starts at s; point n carries timestamp
// (s.k + n) * dt.
inline Trajectory rollout(const VehicleState& s, const std::vector<double>& yaw_rates, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("rollout: dt must be positive and finite");
  }
  Trajectory traj;
  traj.agent_id = s.agent_id;
  traj.points.reserve(yaw_rates.size() + 1);
  VehicleState cur = s;
  traj.points.push_back({state_time(cur, dt), cur.x, cur.y});
  for (double r : yaw_rates) {
    cur = propagate_state(cur, r, dt);
    traj.points.push_back({state_time(cur, dt), cur.x, cur.y});
  }
  return traj;
}

}  // namespace react
