// End-to-end single-frame pipeline: context structuring, dual-frame BEV,
// prompt encoding and reduction, backend planning, and residual fusion,
// with per-stage wall-clock timing. Also derives the full-information
// oracle plan used as evaluation ground truth.
#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "react/alignment.hpp"
#include "react/backend.hpp"
#include "react/bev.hpp"
#include "react/config.hpp"
#include "react/kinematics.hpp"
#include "react/metrics.hpp"
#include "react/rtf.hpp"
#include "react/sft.hpp"
#include "react/structuring.hpp"
#include "react/types.hpp"

namespace react {

struct AgentSample {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
};

struct RunResult {
  std::string scenario_id;
  std::string backend;
  ScenarioMeta meta;
  double t_now{0.0};
  VehicleState ego_now;
  std::vector<double> plan_times;
  std::vector<Vec2> nominal;
  std::vector<Vec2> optimized;
  std::vector<Vec2> safe;  // full-information oracle plan
  std::map<std::string, std::vector<AgentSample>> predicted_agents;
  std::map<std::string, std::vector<AgentSample>> actual_agents;
  std::optional<Vec2> hazard_xy;  // true crash site, validated or not
  bool hazard_validated{false};
  bool fallback{false};
  std::string backend_error;
  std::string reasoning;
  int prompt_tokens{0};
  bool prompt_over_budget{false};
  std::map<std::string, double> latency_ms;
  GridSpec grid;                      // final BEV grid (after pooling)
  std::vector<std::string> bev_rows;  // current BEV as '0'/'1' rows
};

namespace detail {

inline VehicleState track_state_at(const std::vector<VehicleState>& track, int k, double dt) {
  if (track.empty()) {
    throw std::invalid_argument("track_state_at: empty track");
  }
  if (k < track.front().k) {
    throw std::invalid_argument("track_state_at: timestep before track start");
  }
  const std::size_t idx = static_cast<std::size_t>(k - track.front().k);
  if (idx < track.size()) {
    return track[idx];
  }
  // constant-velocity extension past the recorded horizon
  VehicleState s = track.back();
  while (s.k < k) {
    s = propagate_state(s, 0.0, dt);
  }
  return s;
}

inline std::vector<std::string> encode_bev_rows(const BevMap& bev) {
  std::vector<std::string> rows;
  rows.reserve(static_cast<std::size_t>(bev.grid.height));
  for (int v = 0; v < bev.grid.height; ++v) {
    std::string row(static_cast<std::size_t>(bev.grid.width), '0');
    for (int u = 0; u < bev.grid.width; ++u) {
      if (bev.at(u, v) > 0.5) {
        row[static_cast<std::size_t>(u)] = '1';
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// Surrounding-agent positions at the plan timestamps, predicted by
// constant-velocity rollout from the decision frame.
inline std::vector<Trajectory> predict_surroundings(const Scenario& scenario, int k_now,
                                                    const std::vector<double>& times,
                                                    int steps_per_waypoint) {
  std::vector<Trajectory> out;
  for (const auto& [id, track] : scenario.agents) {
    if (id == scenario.ego_id) {
      continue;
    }
    VehicleState s = detail::track_state_at(track, k_now, scenario.dt);
    Trajectory traj;
    traj.agent_id = id;
    traj.points.push_back({times[0], s.x, s.y});
    for (std::size_t j = 1; j < times.size(); ++j) {
      for (int i = 0; i < steps_per_waypoint; ++i) {
        s = propagate_state(s, 0.0, scenario.dt);
      }
      traj.points.push_back({times[j], s.x, s.y});
    }
    out.push_back(std::move(traj));
  }
  return out;
}

inline RunResult run_pipeline(const Scenario& scenario, const std::string& scenario_id,
                              const HarnessConfig& cfg) {
  constexpr double waypoint_cadence_s = 0.5;
  const double t_now = cfg.validation.history_window_s;
  const int k_now = static_cast<int>(std::lround(t_now / scenario.dt));
  if (k_now < 1) {
    throw std::invalid_argument("run_pipeline: decision frame needs at least one past frame");
  }
  const int steps_per_waypoint = static_cast<int>(std::lround(waypoint_cadence_s / scenario.dt));
  if (steps_per_waypoint < 1 ||
      std::abs(steps_per_waypoint * scenario.dt - waypoint_cadence_s) > 1e-9) {
    throw std::invalid_argument("run_pipeline: dt must divide the 0.5 s waypoint cadence");
  }

  RunResult rr;
  rr.scenario_id = scenario_id;
  rr.backend = to_string(cfg.backend.kind);
  rr.meta = scenario.meta;
  rr.t_now = t_now;

  using clock = std::chrono::steady_clock;
  auto timed = [&rr](const char* name, auto&& fn) {
    const auto t0 = clock::now();
    fn();
    const auto t1 = clock::now();
    rr.latency_ms[name] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  };
  const auto wall0 = clock::now();

  ContextPackage ctx;
  timed("structuring", [&] { ctx = build_context(scenario, t_now, cfg.validation); });
  rr.hazard_validated = ctx.hazard.has_value();
  if (scenario.hazard) {
    rr.hazard_xy = scenario.hazard->pos();
  }
  rr.ego_now = detail::track_state_at(scenario.ego_track(), k_now, scenario.dt);

  BevMap bev_now(cfg.grid, t_now);
  BevMap bev_past(cfg.grid, t_now - scenario.dt);
  timed("bev", [&] {
    std::vector<VehicleState> frame_now;
    std::vector<VehicleState> frame_past;
    for (const auto& [id, track] : scenario.agents) {
      frame_now.push_back(detail::track_state_at(track, k_now, scenario.dt));
      frame_past.push_back(detail::track_state_at(track, k_now - 1, scenario.dt));
    }
    const VehicleState ego_past =
        detail::track_state_at(scenario.ego_track(), k_now - 1, scenario.dt);
    const std::optional<Vec2> marker =
        ctx.hazard ? std::optional<Vec2>(ctx.hazard->pos()) : std::nullopt;
    const OverlaySpec overlay{cfg.overlay_kappa_m, 1.0, -1, -1};
    bev_now = pool(overlay_axes(rasterize(frame_now, marker, rr.ego_now, cfg.grid, t_now),
                                overlay),
                   cfg.pool_factor);
    bev_past = pool(overlay_axes(rasterize(frame_past, marker, ego_past, cfg.grid,
                                           t_now - scenario.dt),
                                 overlay),
                    cfg.pool_factor);
  });

  TextPrompt tp;
  VisualPrompt vp{bev_now, bev_past, cfg.patch_size};
  timed("prompt", [&] {
    tp = encode_text_prompt(ctx, cfg.instruction);
    const int text_budget = std::max(1, cfg.token_budget - visual_token_count(vp));
    ReduceResult reduced = reduce_tokens(tp, text_budget);
    tp = std::move(reduced.prompt);
    rr.prompt_over_budget = reduced.over_budget;
    rr.prompt_tokens = estimate_tokens(tp, vp);
  });

  Trajectory nominal_traj;
  nominal_traj.agent_id = scenario.ego_id;
  for (std::size_t j = 0; j < ctx.nav_eff.size(); ++j) {
    nominal_traj.points.push_back(
        {t_now + waypoint_cadence_s * static_cast<double>(j), ctx.nav_eff[j].x, ctx.nav_eff[j].y});
    rr.plan_times.push_back(nominal_traj.points.back().t);
    rr.nominal.push_back(ctx.nav_eff[j].xy());
  }

  const std::vector<Trajectory> surroundings =
      predict_surroundings(scenario, k_now, rr.plan_times, steps_per_waypoint);

  PlanResult planned;
  timed("plan", [&] { planned = plan(tp, vp, nominal_traj, cfg.backend, ctx, surroundings); });
  rr.fallback = planned.fallback;
  rr.backend_error = planned.error;
  rr.reasoning = planned.residuals.reasoning;

  timed("rtf", [&] {
    OptimizedPlan fused = apply_residuals(rr.nominal, planned.residuals);
    rr.optimized = std::move(fused.waypoints);
  });

  const auto wall1 = clock::now();
  rr.latency_ms["total"] = std::chrono::duration<double, std::milli>(wall1 - wall0).count();

  // Ground-truth safe plan: the oracle with the unvalidated hazard and the
  // agents' actual futures. Not part of the timed pipeline.
  {
    ContextPackage full = ctx;
    full.hazard = scenario.hazard;
    std::vector<Trajectory> actual;
    for (const auto& [id, track] : scenario.agents) {
      if (id == scenario.ego_id) {
        continue;
      }
      Trajectory traj;
      traj.agent_id = id;
      for (std::size_t j = 0; j < rr.plan_times.size(); ++j) {
        const VehicleState s = detail::track_state_at(
            track, k_now + static_cast<int>(j) * steps_per_waypoint, scenario.dt);
        traj.points.push_back({rr.plan_times[j], s.x, s.y});
        rr.actual_agents[id].push_back({s.x, s.y, s.yaw});
      }
      actual.push_back(std::move(traj));
    }
    const ResidualSet safe_res =
        geometric_avoidance(full, nominal_traj, actual, cfg.backend);
    rr.safe = apply_residuals(rr.nominal, safe_res).waypoints;
  }

  for (const Trajectory& traj : surroundings) {
    auto& samples = rr.predicted_agents[traj.agent_id];
    const auto& track = scenario.agents.at(traj.agent_id);
    const double yaw = detail::track_state_at(track, k_now, scenario.dt).yaw;
    for (const TrajectoryPoint& p : traj.points) {
      samples.push_back({p.x, p.y, yaw});
    }
  }

  rr.grid = bev_now.grid;
  rr.bev_rows = detail::encode_bev_rows(bev_now);
  return rr;
}

// One training record for a scenario: the inference-time prompts paired
// with the full-information oracle's plan and decision log.
inline SftRecord make_sft_record(const Scenario& scenario, const HarnessConfig& cfg) {
  constexpr double waypoint_cadence_s = 0.5;
  const double t_now = cfg.validation.history_window_s;
  const int k_now = static_cast<int>(std::lround(t_now / scenario.dt));
  const int steps_per_waypoint = static_cast<int>(std::lround(waypoint_cadence_s / scenario.dt));

  const ContextPackage ctx = build_context(scenario, t_now, cfg.validation);
  const VehicleState ego_now = detail::track_state_at(scenario.ego_track(), k_now, scenario.dt);
  const VehicleState ego_past =
      detail::track_state_at(scenario.ego_track(), k_now - 1, scenario.dt);
  std::vector<VehicleState> frame_now;
  std::vector<VehicleState> frame_past;
  for (const auto& [id, track] : scenario.agents) {
    frame_now.push_back(detail::track_state_at(track, k_now, scenario.dt));
    frame_past.push_back(detail::track_state_at(track, k_now - 1, scenario.dt));
  }
  const std::optional<Vec2> marker =
      ctx.hazard ? std::optional<Vec2>(ctx.hazard->pos()) : std::nullopt;
  const OverlaySpec overlay{cfg.overlay_kappa_m, 1.0, -1, -1};
  VisualPrompt vp{
      pool(overlay_axes(rasterize(frame_now, marker, ego_now, cfg.grid, t_now), overlay),
           cfg.pool_factor),
      pool(overlay_axes(rasterize(frame_past, marker, ego_past, cfg.grid, t_now - scenario.dt),
                        overlay),
           cfg.pool_factor),
      cfg.patch_size};

  TextPrompt tp = encode_text_prompt(ctx, cfg.instruction);
  const int text_budget = std::max(1, cfg.token_budget - visual_token_count(vp));
  tp = reduce_tokens(tp, text_budget).prompt;

  Trajectory nominal_traj;
  nominal_traj.agent_id = scenario.ego_id;
  std::vector<double> times;
  std::vector<Vec2> nominal;
  for (std::size_t j = 0; j < ctx.nav_eff.size(); ++j) {
    const double t = t_now + waypoint_cadence_s * static_cast<double>(j);
    nominal_traj.points.push_back({t, ctx.nav_eff[j].x, ctx.nav_eff[j].y});
    times.push_back(t);
    nominal.push_back(ctx.nav_eff[j].xy());
  }
  std::vector<Trajectory> actual;
  for (const auto& [id, track] : scenario.agents) {
    if (id == scenario.ego_id) {
      continue;
    }
    Trajectory traj;
    traj.agent_id = id;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const VehicleState s = detail::track_state_at(
          track, k_now + static_cast<int>(j) * steps_per_waypoint, scenario.dt);
      traj.points.push_back({times[j], s.x, s.y});
    }
    actual.push_back(std::move(traj));
  }

  ContextPackage full = ctx;
  full.hazard = scenario.hazard;
  const ResidualSet safe_res = geometric_avoidance(full, nominal_traj, actual, cfg.backend);
  const std::vector<Vec2> safe = apply_residuals(nominal, safe_res).waypoints;
  return build_sft_record(ctx, tp, vp, safe, safe_res.reasoning);
}

// Motion masks over the evaluated future frames, both rendered in the
// decision-frame anchor so they share a grid.
inline std::pair<MotionMaskSeq, MotionMaskSeq> build_motion_masks(const RunResult& rr,
                                                                  int frames) {
  MotionMaskSeq pred;
  MotionMaskSeq gt;
  auto to_mask = [](const BevMap& bev) {
    BinaryMask m(bev.grid.width, bev.grid.height);
    for (std::size_t i = 0; i < bev.cells.size(); ++i) {
      m.cells[i] = bev.cells[i] > 0.5 ? 1 : 0;
    }
    return m;
  };
  for (int f = 1; f <= frames; ++f) {
    const std::size_t j = static_cast<std::size_t>(f);
    std::vector<VehicleState> pred_states;
    std::vector<VehicleState> gt_states;
    for (const auto& [id, samples] : rr.predicted_agents) {
      VehicleState s;
      s.agent_id = id;
      s.x = samples[j].x;
      s.y = samples[j].y;
      s.yaw = samples[j].yaw;
      pred_states.push_back(s);
    }
    for (const auto& [id, samples] : rr.actual_agents) {
      VehicleState s;
      s.agent_id = id;
      s.x = samples[j].x;
      s.y = samples[j].y;
      s.yaw = samples[j].yaw;
      gt_states.push_back(s);
    }
    VehicleState ego_pred = rr.ego_now;
    ego_pred.x = rr.optimized[j].x;
    ego_pred.y = rr.optimized[j].y;
    pred_states.push_back(ego_pred);
    VehicleState ego_gt = rr.ego_now;
    ego_gt.x = rr.safe[j].x;
    ego_gt.y = rr.safe[j].y;
    gt_states.push_back(ego_gt);
    const double t = rr.plan_times[j];
    pred.push_back(to_mask(rasterize(pred_states, std::nullopt, rr.ego_now, rr.grid, t)));
    gt.push_back(to_mask(rasterize(gt_states, std::nullopt, rr.ego_now, rr.grid, t)));
  }
  return {std::move(pred), std::move(gt)};
}

inline nlohmann::ordered_json run_result_to_json(const RunResult& rr) {
  nlohmann::ordered_json j;
  j["scenario_id"] = rr.scenario_id;
  j["backend"] = rr.backend;
  j["meta"] = {{"weather", rr.meta.weather},
               {"time_of_day", rr.meta.time_of_day},
               {"location", rr.meta.location}};
  j["t_now"] = rr.t_now;
  j["ego_now"] = {rr.ego_now.x, rr.ego_now.y, rr.ego_now.yaw};
  j["plan_times"] = rr.plan_times;
  auto plan_array = [](const std::vector<Vec2>& plan) {
    auto arr = nlohmann::ordered_json::array();
    for (const Vec2& p : plan) {
      arr.push_back({p.x, p.y});
    }
    return arr;
  };
  j["nominal"] = plan_array(rr.nominal);
  j["optimized"] = plan_array(rr.optimized);
  j["safe"] = plan_array(rr.safe);
  auto agents_array = [](const std::map<std::string, std::vector<AgentSample>>& agents) {
    auto obj = nlohmann::ordered_json::object();
    for (const auto& [id, samples] : agents) {
      auto arr = nlohmann::ordered_json::array();
      for (const AgentSample& s : samples) {
        arr.push_back({s.x, s.y, s.yaw});
      }
      obj[id] = std::move(arr);
    }
    return obj;
  };
  j["predicted_agents"] = agents_array(rr.predicted_agents);
  j["actual_agents"] = agents_array(rr.actual_agents);
  if (rr.hazard_xy) {
    j["hazard"] = {rr.hazard_xy->x, rr.hazard_xy->y};
  } else {
    j["hazard"] = nullptr;
  }
  j["hazard_validated"] = rr.hazard_validated;
  j["fallback"] = rr.fallback;
  j["backend_error"] = rr.backend_error;
  j["reasoning"] = rr.reasoning;
  j["prompt_tokens"] = rr.prompt_tokens;
  j["prompt_over_budget"] = rr.prompt_over_budget;
  j["latency_ms"] = rr.latency_ms;
  j["grid"] = {{"width", rr.grid.width},
               {"height", rr.grid.height},
               {"scale", rr.grid.scale},
               {"anchor_u", rr.grid.anchor_u},
               {"anchor_v", rr.grid.anchor_v}};
  j["bev_rows"] = rr.bev_rows;
  return j;
}

inline RunResult run_result_from_json(const nlohmann::json& j) {
  RunResult rr;
  rr.scenario_id = j.at("scenario_id").get<std::string>();
  rr.backend = j.at("backend").get<std::string>();
  rr.meta.weather = j.at("meta").at("weather").get<std::string>();
  rr.meta.time_of_day = j.at("meta").at("time_of_day").get<std::string>();
  rr.meta.location = j.at("meta").at("location").get<std::string>();
  rr.t_now = j.at("t_now").get<double>();
  rr.ego_now.x = j.at("ego_now").at(0).get<double>();
  rr.ego_now.y = j.at("ego_now").at(1).get<double>();
  rr.ego_now.yaw = j.at("ego_now").at(2).get<double>();
  rr.plan_times = j.at("plan_times").get<std::vector<double>>();
  auto read_plan = [&](const char* key) {
    std::vector<Vec2> plan;
    for (const auto& p : j.at(key)) {
      plan.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return plan;
  };
  rr.nominal = read_plan("nominal");
  rr.optimized = read_plan("optimized");
  rr.safe = read_plan("safe");
  auto read_agents = [&](const char* key) {
    std::map<std::string, std::vector<AgentSample>> agents;
    for (const auto& [id, arr] : j.at(key).items()) {
      for (const auto& s : arr) {
        agents[id].push_back(
            {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()});
      }
    }
    return agents;
  };
  rr.predicted_agents = read_agents("predicted_agents");
  rr.actual_agents = read_agents("actual_agents");
  if (!j.at("hazard").is_null()) {
    rr.hazard_xy = Vec2{j.at("hazard").at(0).get<double>(), j.at("hazard").at(1).get<double>()};
  }
  rr.hazard_validated = j.at("hazard_validated").get<bool>();
  rr.fallback = j.at("fallback").get<bool>();
  rr.backend_error = j.at("backend_error").get<std::string>();
  rr.reasoning = j.at("reasoning").get<std::string>();
  rr.prompt_tokens = j.at("prompt_tokens").get<int>();
  rr.prompt_over_budget = j.at("prompt_over_budget").get<bool>();
  for (const auto& [stage, ms] : j.at("latency_ms").items()) {
    rr.latency_ms[stage] = ms.get<double>();
  }
  rr.grid.width = j.at("grid").at("width").get<int>();
  rr.grid.height = j.at("grid").at("height").get<int>();
  rr.grid.scale = j.at("grid").at("scale").get<double>();
  rr.grid.anchor_u = j.at("grid").at("anchor_u").get<int>();
  rr.grid.anchor_v = j.at("grid").at("anchor_v").get<int>();
  rr.bev_rows = j.at("bev_rows").get<std::vector<std::string>>();
  return rr;
}

inline void save_run_result(const RunResult& rr, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("save_run_result: cannot open " + path);
  }
  f << run_result_to_json(rr).dump(2) << '\n';
  if (!f) {
    throw std::runtime_error("save_run_result: write failed for " + path);
  }
}

inline RunResult load_run_result(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("load_run_result: cannot open " + path);
  }
  nlohmann::json j;
  f >> j;
  return run_result_from_json(j);
}

}  // namespace react
