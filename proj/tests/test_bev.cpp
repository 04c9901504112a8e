#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "react/bev.hpp"
#include "oracles.hpp"

using react::BevMap;
using react::GridSpec;
using react::OverlaySpec;
using react::Vec2;
using react::VehicleState;

namespace {

VehicleState agent_at(double x, double y, double yaw = 0.0) {
  VehicleState s;
  s.x = x;
  s.y = y;
  s.yaw = yaw;
  return s;
}

int occupied_count(const BevMap& bev) {
  int n = 0;
  for (double c : bev.cells) {
    n += c > 0.0 ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST_CASE("pixel to metric map and inverse") {
  GridSpec g{64, 64, 0.25, 32, 32};
  const Vec2 m = react::pixel_to_metric(40, 28, g);
  CHECK(m.x == Catch::Approx(2.0));
  CHECK(m.y == Catch::Approx(-1.0));

  const Vec2 origin = react::pixel_to_metric(32, 32, g);
  CHECK(origin.x == 0.0);
  CHECK(origin.y == 0.0);

  const auto p = react::metric_to_pixel(2.0, -1.0, g);
  CHECK(p.u == 40);
  CHECK(p.v == 28);
  CHECK(p.in_bounds);

  CHECK_FALSE(react::metric_to_pixel(100.0, 0.0, g).in_bounds);
}

TEST_CASE("metric/pixel round trips") {
  GridSpec g{64, 64, 0.25, 32, 48};
  oracle::Rng rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    // pixel -> metric -> pixel is exact in bounds
    const int u = rng.integer(0, g.width - 1);
    const int v = rng.integer(0, g.height - 1);
    const Vec2 m = react::pixel_to_metric(u, v, g);
    const auto p = react::metric_to_pixel(m.x, m.y, g);
    CHECK(p.u == u);
    CHECK(p.v == v);

    // metric -> pixel -> metric lands within half a cell per axis
    const double x = rng.real(-7.5, 7.5);
    const double y = rng.real(-11.5, 3.5);
    const auto q = react::metric_to_pixel(x, y, g);
    const Vec2 back = react::pixel_to_metric(q.u, q.v, g);
    CHECK(std::abs(back.x - x) <= g.scale / 2 + 1e-12);
    CHECK(std::abs(back.y - y) <= g.scale / 2 + 1e-12);
  }
}

TEST_CASE("lone ego occupies only cells around the anchor") {
  GridSpec g{64, 64, 0.25, 32, 48};
  const VehicleState ego = agent_at(12.0, -3.0);
  const BevMap bev = react::rasterize({ego}, std::nullopt, ego, g, 0.0);
  REQUIRE(occupied_count(bev) > 0);
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) {
      if (bev.at(u, v) > 0.0) {
        const Vec2 m = react::pixel_to_metric(u, v, g);
        CHECK(std::abs(m.x) <= 2.25);
        CHECK(std::abs(m.y) <= 1.0);
      }
    }
  }
}

TEST_CASE("agent ahead lands at the mapped pixel") {
  GridSpec g{64, 64, 0.25, 32, 48};
  const VehicleState ego = agent_at(100.0, 50.0);
  const VehicleState other = agent_at(110.0, 50.0);
  const BevMap bev = react::rasterize({ego, other}, std::nullopt, ego, g, 0.0);
  const auto center = react::metric_to_pixel(10.0, 0.0, g);
  REQUIRE(center.in_bounds);
  CHECK(bev.at(center.u, center.v) == 1.0);
  // cells clearly outside both footprints stay empty
  const auto far_off = react::metric_to_pixel(10.0, -8.0, g);
  CHECK(bev.at(far_off.u, far_off.v) == 0.0);
}

TEST_CASE("moving agent displaces by v*dt between frames") {
  GridSpec g{128, 128, 0.25, 64, 64};
  const VehicleState ego = agent_at(0.0, 0.0);  // stationary observer
  VehicleState mover = agent_at(5.0, -4.0);
  mover.vx = 5.0;
  const BevMap before = react::rasterize({mover}, std::nullopt, ego, g, 0.0);
  VehicleState moved = mover;
  const double dt = 1.0;
  moved.x += mover.vx * dt;
  const BevMap after = react::rasterize({moved}, std::nullopt, ego, g, dt);

  // brute-force pixel diff: every occupied pixel must reappear shifted by
  // v*dt/scale columns
  const int shift = static_cast<int>(std::lround(mover.vx * dt / g.scale));
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) {
      if (before.at(u, v) > 0.0) {
        REQUIRE(u + shift < g.width);
        CHECK(after.at(u + shift, v) == 1.0);
      }
    }
  }
  CHECK(occupied_count(before) == occupied_count(after));
}

TEST_CASE("hazard disc is drawn around its relative position") {
  GridSpec g{64, 64, 0.25, 32, 32};
  const VehicleState ego = agent_at(20.0, 0.0);
  const BevMap bev = react::rasterize({}, Vec2{25.0, 2.0}, ego, g, 0.0);
  int count = 0;
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) {
      if (bev.at(u, v) > 0.0) {
        ++count;
        const Vec2 m = react::pixel_to_metric(u, v, g);
        CHECK(react::euclidean(m, Vec2{5.0, 2.0}) <= 1.0 + 1e-12);
      }
    }
  }
  CHECK(count > 0);
}

TEST_CASE("agents outside the grid are clipped silently") {
  GridSpec g{32, 32, 0.5, 16, 16};
  const VehicleState ego = agent_at(0.0, 0.0);
  const BevMap bev = react::rasterize({agent_at(500.0, 0.0)}, std::nullopt, ego, g, 0.0);
  CHECK(occupied_count(bev) == 0);
}

TEST_CASE("rasterize is deterministic") {
  GridSpec g{64, 64, 1.25, 32, 32};
  const VehicleState ego = agent_at(3.0, -1.0, 0.3);
  const std::vector<VehicleState> frame{ego, agent_at(10.0, 2.0, -0.7), agent_at(-9.0, 4.0, 1.2)};
  const BevMap a = react::rasterize(frame, Vec2{8.0, 0.5}, ego, g, 1.0);
  const BevMap b = react::rasterize(frame, Vec2{8.0, 0.5}, ego, g, 1.0);
  CHECK(a.cells == b.cells);
}

TEST_CASE("axis overlay writes only the tick set") {
  GridSpec g{64, 64, 1.25, 32, 32};
  BevMap zero(g, 0.0);
  OverlaySpec spec;
  spec.tick_spacing_m = 5.0;  // 4 px
  const BevMap out = react::overlay_axes(zero, spec);

  int modified = 0;
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) {
      if (out.at(u, v) != 0.0) {
        ++modified;
        const bool on_row = v == g.anchor_v && (u - g.anchor_u) % 4 == 0;
        const bool on_col = u == g.anchor_u && (v - g.anchor_v) % 4 == 0;
        CHECK((on_row || on_col));
      }
    }
  }
  // brute-force count of the stroked set
  int expected = 0;
  for (int u = 0; u < g.width; ++u) {
    if ((u - g.anchor_u) % 4 == 0) {
      ++expected;
    }
  }
  for (int v = 0; v < g.height; ++v) {
    if ((v - g.anchor_v) % 4 == 0 && v != g.anchor_v) {
      ++expected;  // anchor pixel counted once
    }
  }
  CHECK(modified == expected);
}

TEST_CASE("axis overlay is idempotent and preserves non-stroked pixels") {
  GridSpec g{64, 48, 0.5, 20, 24};
  oracle::Rng rng(43);
  BevMap bev(g, 0.0);
  for (auto& c : bev.cells) {
    c = rng.real(0.0, 1.0) < 0.2 ? 1.0 : 0.0;
  }
  OverlaySpec spec;
  spec.tick_spacing_m = 2.0;
  const BevMap once = react::overlay_axes(bev, spec);
  const BevMap twice = react::overlay_axes(once, spec);
  CHECK(once.cells == twice.cells);

  const int tick_px = 4;
  for (int v = 0; v < g.height; ++v) {
    for (int u = 0; u < g.width; ++u) {
      const bool stroked = (v == g.anchor_v && (u - g.anchor_u) % tick_px == 0) ||
                           (u == g.anchor_u && (v - g.anchor_v) % tick_px == 0);
      if (!stroked) {
        CHECK(once.at(u, v) == bev.at(u, v));
      } else {
        CHECK(once.at(u, v) == spec.stroke_value);
      }
    }
  }
}

TEST_CASE("max pooling halves the grid and doubles the scale") {
  GridSpec g{128, 128, 0.625, 64, 64};
  BevMap bev(g, 2.0);
  bev.at(3, 5) = 1.0;
  const BevMap pooled = react::pool(bev, 2);
  CHECK(pooled.grid.width == 64);
  CHECK(pooled.grid.height == 64);
  CHECK(pooled.grid.scale == Catch::Approx(1.25));
  CHECK(pooled.grid.anchor_u == 32);
  CHECK(pooled.timestamp == 2.0);
  CHECK(pooled.at(1, 2) == 1.0);
}

TEST_CASE("pool factor 1 is identity and non-divisible factors are rejected") {
  GridSpec g{64, 64, 1.25, 32, 32};
  BevMap bev(g, 0.0);
  bev.at(10, 10) = 1.0;
  CHECK(react::pool(bev, 1).cells == bev.cells);
  CHECK_THROWS_AS(react::pool(bev, 3), std::invalid_argument);
  CHECK_THROWS_AS(react::pool(bev, 0), std::invalid_argument);
}

TEST_CASE("pooled cells are occupied exactly when their window is") {
  oracle::Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    GridSpec g{16, 16, 1.0, 8, 8};
    BevMap bev(g, 0.0);
    for (auto& c : bev.cells) {
      c = rng.real(0.0, 1.0) < 0.3 ? 1.0 : 0.0;
    }
    const int factor = rng.integer(0, 1) == 0 ? 2 : 4;
    const BevMap pooled = react::pool(bev, factor);
    int source_occupied = 0;
    int pooled_occupied = 0;
    for (int v = 0; v < pooled.grid.height; ++v) {
      for (int u = 0; u < pooled.grid.width; ++u) {
        bool any = false;  // brute-force window scan
        for (int dv = 0; dv < factor; ++dv) {
          for (int du = 0; du < factor; ++du) {
            any = any || bev.at(u * factor + du, v * factor + dv) > 0.0;
          }
        }
        CHECK((pooled.at(u, v) > 0.0) == any);
        pooled_occupied += pooled.at(u, v) > 0.0 ? 1 : 0;
      }
    }
    for (double c : bev.cells) {
      source_occupied += c > 0.0 ? 1 : 0;
    }
    CHECK(pooled_occupied * factor * factor >= source_occupied);
  }
}

TEST_CASE("PGM encoding is a valid P5 payload") {
  GridSpec g{4, 2, 1.0, 0, 0};
  BevMap bev(g, 0.0);
  bev.at(0, 0) = 1.0;
  bev.at(3, 1) = 0.5;
  const std::string pgm = react::encode_pgm(bev);
  CHECK(pgm.rfind("P5\n4 2\n255\n", 0) == 0);
  REQUIRE(pgm.size() == 11 + 8);
  CHECK(static_cast<unsigned char>(pgm[11]) == 255);
  CHECK(static_cast<unsigned char>(pgm[11 + 7]) == 128);
}
