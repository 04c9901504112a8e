#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "react/kinematics.hpp"
#include "oracles.hpp"

using react::propagate_state;
using react::rollout;
using react::Trajectory;
using react::VehicleState;

TEST_CASE("propagate_state advances position by velocity") {
  VehicleState s;
  s.vx = 10.0;
  const VehicleState next = propagate_state(s, 0.0, 0.1);
  CHECK(next.x == Catch::Approx(1.0));
  CHECK(next.y == 0.0);
  CHECK(next.yaw == 0.0);
  CHECK(next.k == 1);
}

TEST_CASE("propagate_state displacement magnitude") {
  VehicleState s;
  s.vx = 3.0;
  s.vy = 4.0;
  const VehicleState next = propagate_state(s, 0.0, 1.0);
  CHECK(std::hypot(next.x - s.x, next.y - s.y) == Catch::Approx(5.0));
}

TEST_CASE("propagate_state integrates yaw and conserves z") {
  VehicleState s;
  s.z = 1.5;
  const VehicleState next = propagate_state(s, 0.5, 0.2);
  CHECK(next.yaw == Catch::Approx(0.1));
  CHECK(next.z == 1.5);
  CHECK(next.vx == s.vx);
  CHECK(next.vy == s.vy);
}

TEST_CASE("propagate_state rejects bad input") {
  VehicleState s;
  CHECK_THROWS_AS(propagate_state(s, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(propagate_state(s, 0.0, -0.1), std::invalid_argument);
  s.x = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(propagate_state(s, 0.0, 0.1), std::invalid_argument);
  s.x = 0.0;
  CHECK_THROWS_AS(propagate_state(s, std::numeric_limits<double>::infinity(), 0.1),
                  std::invalid_argument);
}

TEST_CASE("rollout closed form for straight motion") {
  VehicleState s;
  s.x = 7.0;
  s.vx = 10.0;
  const Trajectory traj = rollout(s, std::vector<double>(20, 0.0), 0.1);
  REQUIRE(traj.size() == 21);
  CHECK(traj.points.back().x == Catch::Approx(7.0 + 10.0 * 20 * 0.1).margin(1e-12));
  CHECK(traj.points.back().t == Catch::Approx(2.0));
}

TEST_CASE("rollout with no rates is a single point") {
  VehicleState s;
  s.x = 2.0;
  s.y = -1.0;
  const Trajectory traj = rollout(s, {}, 0.1);
  REQUIRE(traj.size() == 1);
  CHECK(traj.points[0].x == 2.0);
  CHECK(traj.points[0].y == -1.0);
}

TEST_CASE("rollout equals repeated propagation") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    VehicleState s;
    s.x = rng.real(-50.0, 50.0);
    s.y = rng.real(-50.0, 50.0);
    s.vx = rng.real(-15.0, 15.0);
    s.vy = rng.real(-5.0, 5.0);
    s.yaw = rng.real(-3.0, 3.0);
    const double dt = rng.real(0.01, 0.5);
    std::vector<double> rates;
    for (int i = 0; i < rng.integer(0, 30); ++i) {
      rates.push_back(rng.real(-1.0, 1.0));
    }
    const Trajectory traj = rollout(s, rates, dt);

    VehicleState cur = s;  // step-by-step loop oracle
    REQUIRE(traj.size() == rates.size() + 1);
    CHECK(traj.points[0].x == cur.x);
    for (std::size_t i = 0; i < rates.size(); ++i) {
      cur = propagate_state(cur, rates[i], dt);
      CHECK(traj.points[i + 1].x == cur.x);
      CHECK(traj.points[i + 1].y == cur.y);
    }
  }
}

TEST_CASE("split propagation matches combined step") {
  oracle::Rng rng(18);
  for (int trial = 0; trial < 200; ++trial) {
    VehicleState s;
    s.x = rng.real(-100.0, 100.0);
    s.y = rng.real(-100.0, 100.0);
    s.vx = rng.real(-20.0, 20.0);
    s.vy = rng.real(-20.0, 20.0);
    const double r = rng.real(-1.0, 1.0);
    const double a = rng.real(0.01, 0.5);
    const double b = rng.real(0.01, 0.5);
    const VehicleState split = propagate_state(propagate_state(s, r, a), r, b);
    const VehicleState once = propagate_state(s, r, a + b);
    CHECK(std::abs(split.x - once.x) < 1e-12);
    CHECK(std::abs(split.y - once.y) < 1e-12);
  }
}

TEST_CASE("yaw normalization stays in (-pi, pi] and never moves position") {
  oracle::Rng rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    VehicleState s;
    s.yaw = rng.real(-40.0, 40.0);
    const double r = rng.real(-5.0, 5.0);
    const VehicleState next = propagate_state(s, r, 0.3);
    CHECK(next.yaw > -std::numbers::pi);
    CHECK(next.yaw <= std::numbers::pi);
    CHECK(next.x == s.x + s.vx * 0.3);
    CHECK(next.y == s.y + s.vy * 0.3);
  }
  CHECK(react::normalize_yaw(std::numbers::pi) == std::numbers::pi);
  CHECK(react::normalize_yaw(-std::numbers::pi) == std::numbers::pi);
  CHECK(react::normalize_yaw(3.0 * std::numbers::pi) == Catch::Approx(std::numbers::pi));
}
