// Seeded synthetic scenario generator. Each episode has 2 s of history and
// 2 s of future at 10 Hz, an ego on a gently drifting route, a lead vehicle
// ahead, and (usually) a crash site on the route beyond the lead, known only
// through the RSU alert. Route waypoints and hazard offsets are kept on
// coarse dyadic grids so residual targets subtract exactly.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "react/kinematics.hpp"
#include "react/types.hpp"

namespace react {

enum class Location { small_town, downtown, rural, highway, intersection };
enum class Weather { clear, cloudy, rainy, wet };
enum class TimeOfDay { noon, sunset, night };

inline std::string to_string(Location l) {
  switch (l) {
    case Location::small_town: return "small_town";
    case Location::downtown: return "downtown";
    case Location::rural: return "rural";
    case Location::highway: return "highway";
    case Location::intersection: return "intersection";
  }
  return "small_town";
}

inline std::string to_string(Weather w) {
  switch (w) {
    case Weather::clear: return "clear";
    case Weather::cloudy: return "cloudy";
    case Weather::rainy: return "rainy";
    case Weather::wet: return "wet";
  }
  return "clear";
}

inline std::string to_string(TimeOfDay t) {
  switch (t) {
    case TimeOfDay::noon: return "noon";
    case TimeOfDay::sunset: return "sunset";
    case TimeOfDay::night: return "night";
  }
  return "noon";
}

inline Location location_from_string(const std::string& s) {
  if (s == "small_town") return Location::small_town;
  if (s == "downtown") return Location::downtown;
  if (s == "rural") return Location::rural;
  if (s == "highway") return Location::highway;
  if (s == "intersection") return Location::intersection;
  throw std::invalid_argument("unknown location: " + s);
}

inline Weather weather_from_string(const std::string& s) {
  if (s == "clear") return Weather::clear;
  if (s == "cloudy") return Weather::cloudy;
  if (s == "rainy") return Weather::rainy;
  if (s == "wet") return Weather::wet;
  throw std::invalid_argument("unknown weather: " + s);
}

inline TimeOfDay time_of_day_from_string(const std::string& s) {
  if (s == "noon") return TimeOfDay::noon;
  if (s == "sunset") return TimeOfDay::sunset;
  if (s == "night") return TimeOfDay::night;
  throw std::invalid_argument("unknown time_of_day: " + s);
}

struct ScenarioProfile {
  Location location{Location::small_town};
  Weather weather{Weather::clear};
  TimeOfDay time_of_day{TimeOfDay::noon};
  int density{3};  // surrounding agents, lead included
  std::uint64_t seed{0};
};

// "location:weather:time_of_day:density", e.g. "downtown:rainy:noon:4".
inline ScenarioProfile profile_from_string(const std::string& text) {
  ScenarioProfile p;
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) {
    throw std::invalid_argument("profile must be location:weather:time_of_day:density");
  }
  p.location = location_from_string(parts[0]);
  p.weather = weather_from_string(parts[1]);
  p.time_of_day = time_of_day_from_string(parts[2]);
  p.density = std::stoi(parts[3]);
  if (p.density < 1) {
    throw std::invalid_argument("profile density must be >= 1");
  }
  return p;
}

namespace detail {

// Portable uniform draws on top of mt19937_64 (distribution classes are
// implementation-defined).
inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int randint(std::mt19937_64& rng, int n) {  // [0, n)
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

inline double quarter(std::mt19937_64& rng, double lo, double hi) {  // 0.25-grid value
  const int n = static_cast<int>(std::lround((hi - lo) / 0.25)) + 1;
  return lo + 0.25 * randint(rng, n);
}

inline double q64(double v) { return std::round(v * 64.0) / 64.0; }

}  // namespace detail

// Deterministic for a given profile (seed included).
inline Scenario generate_scenario(const ScenarioProfile& profile) {
  if (profile.density < 1) {
    throw std::invalid_argument("generate_scenario: density must be >= 1");
  }
  std::mt19937_64 rng(profile.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);

  Scenario s;
  s.dt = 0.1;
  s.ego_id = "ego";
  s.meta.weather = to_string(profile.weather);
  s.meta.time_of_day = to_string(profile.time_of_day);
  s.meta.location = to_string(profile.location);

  const int frames = 41;      // 4 s: 2 s history + 2 s future around t0 = 2 s
  const double t0 = 2.0;

  // Speed band per location, trimmed in adverse conditions; 0.25-grid.
  double v_lo = 4.25;
  double v_hi = 4.75;
  switch (profile.location) {
    case Location::small_town: v_lo = 4.25; v_hi = 4.75; break;
    case Location::intersection: v_lo = 4.25; v_hi = 4.75; break;
    case Location::downtown: v_lo = 4.25; v_hi = 5.0; break;
    case Location::rural: v_lo = 4.5; v_hi = 5.0; break;
    case Location::highway: v_lo = 4.75; v_hi = 5.25; break;
  }
  double v = detail::quarter(rng, v_lo, v_hi);
  if (profile.weather == Weather::rainy || profile.weather == Weather::wet ||
      profile.time_of_day == TimeOfDay::night) {
    v = std::max(4.25, v - 0.25);
  }

  const double x0 = detail::quarter(rng, -20.0, 20.0);
  const double y0 = detail::quarter(rng, -2.0, 2.0);

  auto make_track = [&](const std::string& id, double sx, double sy, double svx, double svy,
                        double yaw) {
    VehicleState st;
    st.agent_id = id;
    st.x = sx;
    st.y = sy;
    st.vx = svx;
    st.vy = svy;
    st.yaw = yaw;
    st.k = 0;
    std::vector<VehicleState> track{st};
    for (int k = 1; k < frames; ++k) {
      track.push_back(propagate_state(track.back(), 0.0, s.dt));
    }
    return track;
  };

  s.agents["ego"] = make_track("ego", x0, y0, v, 0.0, 0.0);
  const Vec2 ego_t0{x0 + 2.0 * v, y0};

  // Route: 0.5v spacing, three waypoints of history before the current one,
  // mild lateral drift on a 1/64 grid.
  double drift_amp = 0.25;
  if (profile.location == Location::rural) {
    drift_amp = 0.5;
  } else if (profile.location == Location::downtown) {
    drift_amp = 0.375;
  }
  const double drift_phase = detail::u01(rng) * 6.28;
  const int total_wp = 24;
  const int current = 3;
  s.nav.current_index = static_cast<std::size_t>(current);
  for (int j = 0; j < total_wp; ++j) {
    const double arc = (j - current) * 0.5 * v;
    const double drift =
        j <= current ? 0.0
                     : detail::q64(drift_amp * std::sin(0.35 * (j - current) + drift_phase) *
                                   std::min(1.0, (j - current) / 4.0));
    s.nav.waypoints.push_back({ego_t0.x + arc, y0 + drift, 0.0});
  }

  // Lead vehicle between the ego and the crash site, masking it from view.
  const double lead_gap = detail::quarter(rng, 5.25, 5.75);
  s.agents["veh_1"] = make_track("veh_1", ego_t0.x + lead_gap - 2.0 * v, y0, v, 0.0, 0.0);

  // Crash site on (or just off) the route, beyond the lead vehicle.
  double hazard_prob = 0.92;
  if (profile.weather == Weather::cloudy) {
    hazard_prob = 0.95;
  } else if (profile.weather == Weather::rainy || profile.weather == Weather::wet) {
    hazard_prob = 0.98;
  }
  if (detail::u01(rng) < hazard_prob) {
    const double d_h = std::max(6.0, 1.25 * v);
    const double spacing = 0.5 * v;
    const int seg = current + static_cast<int>(d_h / spacing);
    const double frac = d_h / spacing - std::floor(d_h / spacing);
    const Vec3& a = s.nav.waypoints[static_cast<std::size_t>(seg)];
    const Vec3& b = s.nav.waypoints[static_cast<std::size_t>(seg + 1)];
    Vec2 site{a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y)};
    if (detail::u01(rng) >= 0.5) {
      const double side = detail::u01(rng) < 0.5 ? -1.0 : 1.0;
      site.y += side * (2.25 + 0.25 * detail::randint(rng, 2));
    }
    HazardAlert h;
    h.x = site.x;
    h.y = site.y;
    h.z = 0.0;
    const double t_offsets[] = {-0.75, -0.5, 0.5, 1.0};
    h.t_h = t0 + t_offsets[detail::randint(rng, 4)];
    h.issue_time = std::min(h.t_h, t0) - 0.25;
    s.hazard = h;
  }

  // Remaining traffic stays far off the corridor: parked, oncoming, or
  // parallel tracks at |lateral| >= 12 m.
  for (int i = 2; i <= profile.density; ++i) {
    const double side = i % 2 == 0 ? 1.0 : -1.0;
    const double lat = side * (12.0 + 1.5 * (i - 2));
    const double ax = ego_t0.x + detail::quarter(rng, -15.0, 45.0);
    const int kind = detail::randint(rng, 3);
    double avx = 0.0;
    double ayaw = 0.0;
    if (kind == 1) {
      avx = -v;
      ayaw = std::numbers::pi;
    } else if (kind == 2) {
      avx = std::max(4.25, v - 0.5);
    }
    const std::string id = "veh_" + std::to_string(i);
    s.agents[id] = make_track(id, ax - avx * 2.0, y0 + lat, avx, 0.0, ayaw);
  }

  return s;
}

}  // namespace react
