// Residual trajectory fusion: element-wise addition of planner residuals
// onto the nominal waypoints, plus an optional spacing guard.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "react/planner.hpp"
#include "react/types.hpp"

namespace react {

struct OptimizedPlan {
  std::vector<Vec2> waypoints;
  std::vector<Vec2> source_nominal;
  ResidualSet residuals_applied;
};

// w_j = g_j + dg_j for every j; no smoothing, no reordering.
inline OptimizedPlan apply_residuals(const std::vector<Vec2>& nominal, const ResidualSet& deltas) {
  if (nominal.size() != deltas.deltas.size()) {
    throw std::invalid_argument("apply_residuals: residual count does not match nominal plan");
  }
  OptimizedPlan plan;
  plan.source_nominal = nominal;
  plan.residuals_applied = deltas;
  plan.waypoints.reserve(nominal.size());
  for (std::size_t j = 0; j < nominal.size(); ++j) {
    plan.waypoints.push_back(nominal[j] + deltas.deltas[j]);
  }
  return plan;
}

struct KinematicLimits {
  double max_step{std::numeric_limits<double>::infinity()};
};

// Caps consecutive waypoint spacing by shrinking each residual toward its
// nominal waypoint along its own direction. Off by default in the pipeline;
// the fused plan is otherwise the raw sum.
inline OptimizedPlan clamp_kinematic(const OptimizedPlan& plan, const KinematicLimits& limits) {
  if (!(limits.max_step > 0.0)) {
    throw std::invalid_argument("clamp_kinematic: max_step must be positive");
  }
  OptimizedPlan out = plan;
  for (std::size_t j = 1; j < out.waypoints.size(); ++j) {
    const Vec2 prev = out.waypoints[j - 1];
    if (euclidean(prev, out.waypoints[j]) <= limits.max_step) {
      continue;
    }
    const Vec2 base = out.source_nominal[j] - prev;
    const Vec2 delta = out.residuals_applied.deltas[j];
    // Largest alpha in [0, 1] with |base + alpha*delta| <= max_step.
    const double a = delta.x * delta.x + delta.y * delta.y;
    const double b = 2.0 * (base.x * delta.x + base.y * delta.y);
    const double c = base.x * base.x + base.y * base.y - limits.max_step * limits.max_step;
    double alpha = 0.0;
    if (a > 0.0) {
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0.0) {
        alpha = std::clamp((-b + std::sqrt(disc)) / (2.0 * a), 0.0, 1.0);
      }
    }
    out.waypoints[j] = out.source_nominal[j] + alpha * delta;
    out.residuals_applied.deltas[j] = alpha * delta;
  }
  return out;
}

}  // namespace react
