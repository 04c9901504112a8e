// Core domain types shared across the pipeline. All values are SI units
// (metres, seconds, radians) in the RSU-centered frame unless noted.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace react {

struct Vec2 {
  double x{0.0};
  double y{0.0};
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a.x, s * a.y}; }
inline bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }

inline double euclidean(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  Vec2 xy() const { return {x, y}; }
};

inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

// Common reference frame centered at the roadside unit. x points
// longitudinally (downstream), y laterally to the right, z up.
struct FrameRsu {
  Vec3 origin{};
  Vec3 x_up{1.0, 0.0, 0.0};
  Vec3 y_right{0.0, 1.0, 0.0};
  Vec3 z_up{0.0, 0.0, 1.0};

  bool orthonormal(double tol = 1e-9) const {
    auto dot = [](const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; };
    return std::abs(dot(x_up, x_up) - 1.0) < tol && std::abs(dot(y_right, y_right) - 1.0) < tol &&
           std::abs(dot(z_up, z_up) - 1.0) < tol && std::abs(dot(x_up, y_right)) < tol &&
           std::abs(dot(x_up, z_up)) < tol && std::abs(dot(y_right, z_up)) < tol;
  }
};

// One agent sample on the shared discrete time grid (timestamp = k * dt).
struct VehicleState {
  double x{0.0};
  double y{0.0};
  double z{0.0};
  double vx{0.0};
  double vy{0.0};
  double yaw{0.0};
  std::string agent_id;
  int k{0};

  Vec2 pos() const { return {x, y}; }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(vx) &&
           std::isfinite(vy) && std::isfinite(yaw);
  }
};

inline double state_time(const VehicleState& s, double dt) { return s.k * dt; }

// RSU-broadcast alert: collision location plus its (predicted or elapsed)
// occurrence time on the scenario clock. t_h == issue_time means "just
// happened"; t_h beyond it is a forecast.
struct HazardAlert {
  double x{0.0};
  double y{0.0};
  double z{0.0};
  double t_h{0.0};
  double issue_time{0.0};

  Vec2 pos() const { return {x, y}; }
};

// Route supplied by the onboard planner: ordered spatial waypoints without
// timestamps; the last one is the destination.
struct NavigationPlan {
  std::vector<Vec3> waypoints;
  std::size_t current_index{0};
};

struct TrajectoryPoint {
  double t{0.0};
  double x{0.0};
  double y{0.0};

  Vec2 pos() const { return {x, y}; }
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::string agent_id;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct ScenarioMeta {
  std::string weather{"clear"};
  std::string time_of_day{"noon"};
  std::string location{"small_town"};
};

// A full synthetic episode: per-agent state tracks on a shared timestep
// grid, the RSU hazard (if any), and the ego route.
struct Scenario {
  std::map<std::string, std::vector<VehicleState>> agents;
  std::string ego_id;
  std::optional<HazardAlert> hazard;
  NavigationPlan nav;
  double dt{0.1};
  ScenarioMeta meta;

  const std::vector<VehicleState>& ego_track() const {
    auto it = agents.find(ego_id);
    if (it == agents.end()) {
      throw std::invalid_argument("scenario: ego_id '" + ego_id + "' not present in agents");
    }
    return it->second;
  }
};

}  // namespace react
