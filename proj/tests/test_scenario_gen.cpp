#include <catch2/catch_amalgamated.hpp>

#include "react/scenario_gen.hpp"
#include "react/scenario_io.hpp"
#include "react/structuring.hpp"

using react::Scenario;
using react::ScenarioProfile;

TEST_CASE("profile string parsing") {
  const ScenarioProfile p = react::profile_from_string("downtown:rainy:night:4");
  CHECK(p.location == react::Location::downtown);
  CHECK(p.weather == react::Weather::rainy);
  CHECK(p.time_of_day == react::TimeOfDay::night);
  CHECK(p.density == 4);
  CHECK_THROWS_AS(react::profile_from_string("downtown:rainy:night"), std::invalid_argument);
  CHECK_THROWS_AS(react::profile_from_string("mars:rainy:night:4"), std::invalid_argument);
  CHECK_THROWS_AS(react::profile_from_string("downtown:rainy:night:0"), std::invalid_argument);
}

TEST_CASE("generation is deterministic per seed") {
  ScenarioProfile p;
  p.seed = 1234;
  p.density = 4;
  const std::string a = react::scenario_to_json(react::generate_scenario(p)).dump();
  const std::string b = react::scenario_to_json(react::generate_scenario(p)).dump();
  CHECK(a == b);

  p.seed = 1235;
  const std::string c = react::scenario_to_json(react::generate_scenario(p)).dump();
  CHECK(a != c);
}

TEST_CASE("density controls the surrounding agent count") {
  ScenarioProfile p;
  p.seed = 7;
  p.density = 1;
  const Scenario lone = react::generate_scenario(p);
  CHECK(lone.agents.size() == 2);  // ego + lead
  CHECK(lone.agents.count("ego") == 1);
  CHECK(lone.agents.count("veh_1") == 1);

  p.density = 5;
  const Scenario busy = react::generate_scenario(p);
  CHECK(busy.agents.size() == 6);
}

TEST_CASE("every agent shares the timestep grid with 2 s history and future") {
  ScenarioProfile p;
  p.seed = 99;
  p.density = 3;
  const Scenario s = react::generate_scenario(p);
  CHECK(s.dt == 0.1);
  for (const auto& [id, track] : s.agents) {
    REQUIRE(track.size() == 41);
    for (std::size_t i = 0; i < track.size(); ++i) {
      CHECK(track[i].k == static_cast<int>(i));
    }
  }
  CHECK(s.nav.current_index < s.nav.waypoints.size());
}

TEST_CASE("generated hazards pass validation at the decision frame") {
  react::ValidationConfig cfg;
  int with_hazard = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ScenarioProfile p;
    p.seed = seed;
    p.location = static_cast<react::Location>(seed % 5);
    p.weather = static_cast<react::Weather>(seed % 4);
    p.time_of_day = static_cast<react::TimeOfDay>(seed % 3);
    p.density = 1 + static_cast<int>(seed % 4);
    const Scenario s = react::generate_scenario(p);
    if (!s.hazard) {
      continue;
    }
    ++with_hazard;
    CHECK(react::validate_hazard(*s.hazard, s.nav, 2.0, cfg).has_value());
    CHECK(s.hazard->t_h >= 0.0);
    // occlusion geometry: the crash site sits beyond the lead vehicle
    const auto& lead = s.agents.at("veh_1");
    const double lead_x_t0 = lead[20].x;
    CHECK(s.hazard->x > lead_x_t0);
    const auto& ego = s.agents.at("ego");
    CHECK(lead_x_t0 > ego[20].x);
  }
  CHECK(with_hazard > 150);  // most profiles carry a hazard
}

TEST_CASE("scenario JSON round-trips through the schema") {
  ScenarioProfile p;
  p.seed = 4242;
  p.density = 3;
  p.weather = react::Weather::wet;
  const Scenario s = react::generate_scenario(p);
  const auto j = react::scenario_to_json(s);
  const Scenario back = react::scenario_from_json(j);
  CHECK(react::scenario_to_json(back).dump() == j.dump());
  CHECK(back.meta.weather == "wet");
  REQUIRE(back.hazard.has_value() == s.hazard.has_value());
  CHECK(back.nav.waypoints.size() == s.nav.waypoints.size());
}
