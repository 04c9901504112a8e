#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "react/metrics.hpp"
#include "oracles.hpp"

using react::BinaryMask;
using react::MotionMaskSeq;
using react::Trajectory;

namespace {

BinaryMask mask_from(std::initializer_list<std::pair<int, int>> cells, int w = 4, int h = 4) {
  BinaryMask m(w, h);
  for (const auto& [u, v] : cells) {
    m.at(u, v) = 1;
  }
  return m;
}

Trajectory traj_from(std::initializer_list<std::pair<double, double>> pts, double dt = 1.0) {
  Trajectory t;
  double time = 0.0;
  for (const auto& [x, y] : pts) {
    t.points.push_back({time, x, y});
    time += dt;
  }
  return t;
}

std::vector<double> times_of(const Trajectory& t) {
  std::vector<double> out;
  for (const auto& p : t.points) {
    out.push_back(p.t);
  }
  return out;
}

}  // namespace

TEST_CASE("vpq on hand-built frames") {
  // frame 1: IoU 1/2, frame 2: IoU 3/4
  MotionMaskSeq pred{mask_from({{0, 0}}), mask_from({{0, 0}, {1, 0}, {2, 0}})};
  MotionMaskSeq gt{mask_from({{0, 0}, {1, 1}}), mask_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}})};
  CHECK(react::vpq(pred, gt) == Catch::Approx(0.625));

  CHECK(react::vpq(gt, gt) == 1.0);

  MotionMaskSeq empty_pair{BinaryMask(4, 4)};
  CHECK(react::vpq(empty_pair, empty_pair) == 1.0);

  MotionMaskSeq wrong{mask_from({{0, 0}})};
  CHECK_THROWS_AS(react::vpq(pred, wrong), std::invalid_argument);
  MotionMaskSeq bad_shape{mask_from({{0, 0}}, 5, 4), mask_from({{0, 0}}, 5, 4)};
  CHECK_THROWS_AS(react::vpq(pred, bad_shape), std::invalid_argument);
}

TEST_CASE("miou on hand-built regions") {
  // IoU 0.6 = 3/5 and 0.8 = 4/5
  const BinaryMask a_pred = mask_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const BinaryMask a_gt = mask_from({{0, 0}, {1, 0}, {2, 0}, {0, 1}});
  const BinaryMask b_pred = mask_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const BinaryMask b_gt = mask_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1}});
  CHECK(oracle::iou(a_pred, a_gt) == Catch::Approx(0.6));
  CHECK(oracle::iou(b_pred, b_gt) == Catch::Approx(0.8));
  CHECK(react::miou({{a_pred, a_gt}, {b_pred, b_gt}}) == Catch::Approx(0.7));
  CHECK(react::miou({{a_gt, a_gt}, {b_gt, b_gt}}) == 1.0);
  CHECK_THROWS_AS(react::miou({}), std::invalid_argument);
}

TEST_CASE("mask metrics match the set-count oracle on random instances") {
  oracle::Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = rng.integer(1, 16);
    const int h = rng.integer(1, 16);
    const int frames = rng.integer(1, 6);
    MotionMaskSeq pred;
    MotionMaskSeq gt;
    for (int f = 0; f < frames; ++f) {
      pred.push_back(oracle::random_mask(rng, w, h, rng.real(0.0, 0.6)));
      gt.push_back(oracle::random_mask(rng, w, h, rng.real(0.0, 0.6)));
    }
    CHECK(std::abs(react::vpq(pred, gt) - oracle::vpq(pred, gt)) <= 1e-12);
    CHECK(std::abs(react::miou({{pred[0], gt[0]}}) - oracle::iou(pred[0], gt[0])) <= 1e-12);
    // per-frame IoU is symmetric
    CHECK(react::vpq(pred, gt) == react::vpq(gt, pred));
  }
}

TEST_CASE("min_ade and min_fde on constant offsets") {
  const Trajectory gt = traj_from({{0.0, 0.0}, {1.0, 0.0}});
  Trajectory far = gt;
  Trajectory near = gt;
  for (auto& p : far.points) {
    p.y += 1.0;
  }
  for (auto& p : near.points) {
    p.y += 0.5;
  }
  CHECK(react::min_ade({far, near}, gt) == Catch::Approx(0.5));
  CHECK(react::min_fde({far, near}, gt) == Catch::Approx(0.5));
  CHECK(react::min_ade({far, gt}, gt) == 0.0);
  CHECK(react::min_fde({far, gt}, gt) == 0.0);

  Trajectory short_traj = traj_from({{0.0, 0.0}});
  CHECK_THROWS_AS(react::min_ade({short_traj}, gt), std::invalid_argument);
  Trajectory skewed = gt;
  skewed.points[1].t = 9.0;
  CHECK_THROWS_AS(react::min_ade({skewed}, gt), std::invalid_argument);
}

TEST_CASE("displacement metrics match the loop oracle on random candidates") {
  oracle::Rng rng(62);
  for (int trial = 0; trial < 300; ++trial) {
    const int steps = rng.integer(1, 10);
    std::vector<double> times;
    for (int i = 0; i < steps; ++i) {
      times.push_back(0.5 * i);
    }
    const Trajectory gt = oracle::random_trajectory(rng, times, 50.0);
    std::vector<Trajectory> candidates;
    const int n = rng.integer(1, 5);
    for (int i = 0; i < n; ++i) {
      candidates.push_back(oracle::random_trajectory(rng, times, 50.0));
    }
    CHECK(std::abs(react::min_ade(candidates, gt) - oracle::min_ade(candidates, gt)) <= 1e-12);
    CHECK(std::abs(react::min_fde(candidates, gt) - oracle::min_fde(candidates, gt)) <= 1e-12);

    // adding the ground truth itself makes the minimum zero
    candidates.push_back(gt);
    CHECK(react::min_ade(candidates, gt) == 0.0);

    // the minimum never exceeds any single candidate's error
    for (const auto& cand : candidates) {
      CHECK(react::min_fde(candidates, gt) <= react::min_fde({cand}, gt));
    }
  }
}

TEST_CASE("collision flags use a strict threshold") {
  const Trajectory ego = traj_from({{0.0, 0.0}, {1.0, 0.0}});
  const Trajectory other = traj_from({{0.0, 4.9}, {1.0, 5.1}});
  const auto res = react::collision_rate(ego, {other}, 5.0);
  REQUIRE(res.record.flags.size() == 2);
  CHECK(res.record.flags[0] == 1);
  CHECK(res.record.flags[1] == 0);
  CHECK(res.rate == Catch::Approx(0.5));

  const Trajectory lonely = traj_from({{100.0, 100.0}, {101.0, 100.0}});
  CHECK(react::collision_rate(lonely, {other}, 5.0).rate == 0.0);

  const auto empty = react::collision_rate(ego, {}, 5.0);
  CHECK(empty.rate == 0.0);
  CHECK(empty.record.flags.empty());
}

TEST_CASE("collision and clearance match the pairwise oracle") {
  oracle::Rng rng(63);
  for (int trial = 0; trial < 300; ++trial) {
    const int steps = rng.integer(1, 10);
    std::vector<double> times;
    for (int i = 0; i < steps; ++i) {
      times.push_back(0.5 * i);
    }
    const Trajectory ego = oracle::random_trajectory(rng, times, 20.0);
    std::vector<Trajectory> others;
    const int n = rng.integer(1, 5);
    for (int i = 0; i < n; ++i) {
      others.push_back(oracle::random_trajectory(rng, times, 20.0));
    }
    const double threshold = rng.real(1.0, 10.0);
    const auto got = react::collision_rate(ego, others, threshold);
    const auto want = oracle::collision(ego, others, threshold);
    CHECK(std::abs(got.rate - want.rate) <= 1e-12);
    CHECK(got.record.flags == want.flags);
    CHECK(std::abs(react::mcd(ego, others) - oracle::mcd(ego, others)) <= 1e-12);

    // raising the threshold never clears a flag
    const auto raised = react::collision_rate(ego, others, threshold + rng.real(0.0, 5.0));
    for (std::size_t i = 0; i < got.record.flags.size(); ++i) {
      CHECK(raised.record.flags[i] >= got.record.flags[i]);
    }

    // adding agents cannot increase clearance
    std::vector<Trajectory> more = others;
    more.push_back(oracle::random_trajectory(rng, times, 20.0));
    CHECK(react::mcd(ego, more) <= react::mcd(ego, others));
  }
}

TEST_CASE("mcd hand values and error paths") {
  const Trajectory ego = traj_from({{0.0, 0.0}, {0.0, 0.0}});
  const Trajectory a = traj_from({{5.0, 0.0}, {1.0, 1.0}});
  CHECK(react::mcd(ego, {a}) == Catch::Approx(std::sqrt(2.0)));

  const Trajectory b = traj_from({{3.0, 4.0}, {3.0, 4.0}});
  CHECK(react::mcd(ego, {b}) == Catch::Approx(5.0));

  CHECK_THROWS_AS(react::mcd(ego, {}), std::invalid_argument);
}

TEST_CASE("crr endpoints and error path") {
  CHECK(react::crr(1.0, 0.23) == Catch::Approx(0.77));
  CHECK(react::crr(0.4, 0.4) == 0.0);
  CHECK(react::crr(0.4, 0.0) == 1.0);
  CHECK_THROWS_AS(react::crr(0.0, 0.1), std::domain_error);

  oracle::Rng rng(64);
  for (int trial = 0; trial < 100; ++trial) {
    const double base = rng.real(0.05, 1.0);
    const double lo = rng.real(0.0, base);
    const double hi = lo + rng.real(0.0, 1.0 - lo);
    CHECK(react::crr(base, hi) <= react::crr(base, lo));  // antitone in the second argument
  }
}

TEST_CASE("latency helper returns a stable median") {
  const double ms = react::measure_latency_ms([] {
    volatile int sink = 0;
    for (int i = 0; i < 1000; ++i) {
      sink = sink + i;
    }
  });
  CHECK(ms >= 0.0);
  CHECK(ms < 1000.0);
  CHECK_THROWS_AS(react::measure_latency_ms([] {}, 0), std::invalid_argument);
}
