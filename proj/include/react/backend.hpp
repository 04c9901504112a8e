// Backend dispatch: every planner maps prompts to a residual set and must
// always return a plan; failures surface as flagged zero-delta fallbacks.
#pragma once

#include "react/planner.hpp"
#include "react/remote_backend.hpp"

namespace react {

// ctx and surroundings feed the geometric backend only; the remote backend
// sees exactly what the prompts carry.
inline PlanResult plan(const TextPrompt& tp, const VisualPrompt& vp, const Trajectory& nominal,
                       const BackendConfig& cfg, const ContextPackage& ctx = {},
                       const std::vector<Trajectory>& surroundings = {}) {
  if (nominal.empty()) {
    throw std::invalid_argument("plan: empty nominal trajectory");
  }
  const std::size_t m = nominal.size();
  switch (cfg.kind) {
    case BackendKind::null_backend:
      return {zero_residuals(m, "Baseline: nominal plan kept."), false, ""};
    case BackendKind::geometric:
      try {
        return {geometric_avoidance(ctx, nominal, surroundings, cfg), false, ""};
      } catch (const std::exception& e) {
        return {zero_residuals(m), true, e.what()};
      }
    case BackendKind::remote:
      return remote_plan(tp, vp, m, cfg);
  }
  return {zero_residuals(m), true, "unknown backend"};
}

}  // namespace react
