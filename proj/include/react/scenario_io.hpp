// Scenario file schema. Top-level keys: dt, ego_id, hazard (nullable),
// nav ({waypoints, current_index}), agents ({id: [[k,x,y,z,vx,vy,yaw],...]}),
// meta ({weather, time_of_day, location}). All numbers decimal, SI units.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "react/types.hpp"

namespace react {

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["dt"] = s.dt;
  j["ego_id"] = s.ego_id;
  if (s.hazard) {
    j["hazard"] = {{"x", s.hazard->x},
                   {"y", s.hazard->y},
                   {"z", s.hazard->z},
                   {"t_h", s.hazard->t_h},
                   {"issue_time", s.hazard->issue_time}};
  } else {
    j["hazard"] = nullptr;
  }
  auto waypoints = nlohmann::ordered_json::array();
  for (const Vec3& wp : s.nav.waypoints) {
    waypoints.push_back({wp.x, wp.y, wp.z});
  }
  j["nav"] = {{"waypoints", std::move(waypoints)}, {"current_index", s.nav.current_index}};
  auto agents = nlohmann::ordered_json::object();
  for (const auto& [id, track] : s.agents) {
    auto rows = nlohmann::ordered_json::array();
    for (const VehicleState& st : track) {
      rows.push_back({st.k, st.x, st.y, st.z, st.vx, st.vy, st.yaw});
    }
    agents[id] = std::move(rows);
  }
  j["agents"] = std::move(agents);
  j["meta"] = {{"weather", s.meta.weather},
               {"time_of_day", s.meta.time_of_day},
               {"location", s.meta.location}};
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.dt = j.at("dt").get<double>();
  if (!(s.dt > 0.0)) {
    throw std::invalid_argument("scenario: dt must be positive");
  }
  s.ego_id = j.at("ego_id").get<std::string>();
  if (!j.at("hazard").is_null()) {
    const auto& h = j.at("hazard");
    s.hazard = HazardAlert{h.at("x").get<double>(), h.at("y").get<double>(),
                           h.at("z").get<double>(), h.at("t_h").get<double>(),
                           h.at("issue_time").get<double>()};
  }
  for (const auto& wp : j.at("nav").at("waypoints")) {
    s.nav.waypoints.push_back({wp.at(0).get<double>(), wp.at(1).get<double>(),
                               wp.at(2).get<double>()});
  }
  s.nav.current_index = j.at("nav").at("current_index").get<std::size_t>();
  for (const auto& [id, rows] : j.at("agents").items()) {
    std::vector<VehicleState> track;
    for (const auto& r : rows) {
      VehicleState st;
      st.k = r.at(0).get<int>();
      st.x = r.at(1).get<double>();
      st.y = r.at(2).get<double>();
      st.z = r.at(3).get<double>();
      st.vx = r.at(4).get<double>();
      st.vy = r.at(5).get<double>();
      st.yaw = r.at(6).get<double>();
      st.agent_id = id;
      track.push_back(st);
    }
    s.agents[id] = std::move(track);
  }
  const auto& m = j.at("meta");
  s.meta.weather = m.at("weather").get<std::string>();
  s.meta.time_of_day = m.at("time_of_day").get<std::string>();
  s.meta.location = m.at("location").get<std::string>();
  if (s.agents.find(s.ego_id) == s.agents.end()) {
    throw std::invalid_argument("scenario: ego_id not present in agents");
  }
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("save_scenario: cannot open " + path);
  }
  f << scenario_to_json(s).dump(2) << '\n';
  if (!f) {
    throw std::runtime_error("save_scenario: write failed for " + path);
  }
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("load_scenario: cannot open " + path);
  }
  nlohmann::json j;
  f >> j;
  return scenario_from_json(j);
}

}  // namespace react
