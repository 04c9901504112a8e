// Evaluation suite: occupancy-map overlap (VPQ, mIOU), displacement errors
// (minADE, minFDE), collision statistics (rate, CRR), clearance (MCD), and
// wall-clock stage timing.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "react/types.hpp"

namespace react {

struct BinaryMask {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> cells;  // row-major, 0 or 1

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t at(int u, int v) const { return cells[static_cast<std::size_t>(v) * width + u]; }
  std::uint8_t& at(int u, int v) { return cells[static_cast<std::size_t>(v) * width + u]; }
};

using MotionMaskSeq = std::vector<BinaryMask>;

struct CollisionRecord {
  std::vector<int> flags;             // 1 iff min distance < threshold
  std::vector<double> min_distances;  // per-frame closest agent distance
};

struct CollisionResult {
  double rate{0.0};
  CollisionRecord record;
};

namespace detail {

inline double mask_iou(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw std::invalid_argument("mask_iou: shape mismatch");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < pred.cells.size(); ++i) {
    const bool p = pred.cells[i] != 0;
    const bool g = gt.cells[i] != 0;
    inter += static_cast<std::size_t>(p && g);
    uni += static_cast<std::size_t>(p || g);
  }
  if (uni == 0) {
    return 1.0;  // both empty: perfect agreement
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline void check_aligned(const Trajectory& a, const Trajectory& b, const char* who) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(who) + ": trajectory length mismatch");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.points[i].t != b.points[i].t) {
      throw std::invalid_argument(std::string(who) + ": trajectory timestamps differ");
    }
  }
}

}  // namespace detail

// Temporal mean IoU of predicted vs ground-truth motion masks.
inline double vpq(const MotionMaskSeq& pred, const MotionMaskSeq& gt) {
  if (pred.size() != gt.size()) {
    throw std::invalid_argument("vpq: sequence length mismatch");
  }
  if (pred.empty()) {
    throw std::invalid_argument("vpq: empty sequence");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    sum += detail::mask_iou(pred[t], gt[t]);
  }
  return sum / static_cast<double>(pred.size());
}

// Mean over scenarios of region overlap.
inline double miou(const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("miou: no scenarios");
  }
  double sum = 0.0;
  for (const auto& [pred, gt] : pairs) {
    sum += detail::mask_iou(pred, gt);
  }
  return sum / static_cast<double>(pairs.size());
}

// Smallest mean per-step displacement among candidate trajectories.
inline double min_ade(const std::vector<Trajectory>& candidates, const Trajectory& gt) {
  if (candidates.empty()) {
    throw std::invalid_argument("min_ade: no candidates");
  }
  if (gt.empty()) {
    throw std::invalid_argument("min_ade: empty ground truth");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& cand : candidates) {
    detail::check_aligned(cand, gt, "min_ade");
    double sum = 0.0;
    for (std::size_t t = 0; t < gt.size(); ++t) {
      sum += euclidean(cand.points[t].pos(), gt.points[t].pos());
    }
    best = std::min(best, sum / static_cast<double>(gt.size()));
  }
  return best;
}

// Smallest final-point displacement among candidate trajectories.
inline double min_fde(const std::vector<Trajectory>& candidates, const Trajectory& gt) {
  if (candidates.empty()) {
    throw std::invalid_argument("min_fde: no candidates");
  }
  if (gt.empty()) {
    throw std::invalid_argument("min_fde: empty ground truth");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& cand : candidates) {
    detail::check_aligned(cand, gt, "min_fde");
    best = std::min(best, euclidean(cand.points.back().pos(), gt.points.back().pos()));
  }
  return best;
}

// Frame-wise collision flags: 1 when the closest agent is strictly under
// the threshold. No surrounding agents yields rate 0 with an empty record.
inline CollisionResult collision_rate(const Trajectory& ego,
                                      const std::vector<Trajectory>& surroundings,
                                      double threshold = 5.0) {
  CollisionResult out;
  if (surroundings.empty()) {
    return out;
  }
  for (const Trajectory& s : surroundings) {
    detail::check_aligned(s, ego, "collision_rate");
  }
  int collisions = 0;
  for (std::size_t t = 0; t < ego.size(); ++t) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const Trajectory& s : surroundings) {
      dmin = std::min(dmin, euclidean(ego.points[t].pos(), s.points[t].pos()));
    }
    const int flag = dmin < threshold ? 1 : 0;
    collisions += flag;
    out.record.flags.push_back(flag);
    out.record.min_distances.push_back(dmin);
  }
  out.rate = static_cast<double>(collisions) / static_cast<double>(ego.size());
  return out;
}

// Relative collision-rate drop against a baseline planner.
inline double crr(double c_baseline, double c_react) {
  if (!(c_baseline > 0.0)) {
    throw std::domain_error("crr: baseline collision rate must be positive");
  }
  return (c_baseline - c_react) / c_baseline;
}

// Minimum ego-to-agent separation over the whole horizon.
inline double mcd(const Trajectory& ego, const std::vector<Trajectory>& surroundings) {
  if (surroundings.empty()) {
    throw std::invalid_argument("mcd: no surrounding agents");
  }
  if (ego.empty()) {
    throw std::invalid_argument("mcd: empty ego trajectory");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& s : surroundings) {
    detail::check_aligned(s, ego, "mcd");
    for (std::size_t t = 0; t < ego.size(); ++t) {
      best = std::min(best, euclidean(ego.points[t].pos(), s.points[t].pos()));
    }
  }
  return best;
}

// Median wall-clock time of fn over reps calls, in milliseconds. The
// caller is responsible for warm-up.
template <class Fn>
double measure_latency_ms(Fn&& fn, int reps = 30) {
  if (reps < 1) {
    throw std::invalid_argument("measure_latency_ms: reps must be >= 1");
  }
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  if (n % 2 == 1) {
    return samples[n / 2];
  }
  return 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

}  // namespace react
