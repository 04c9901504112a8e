// Planner backends: the residual contract, the null baseline, the
// deterministic geometric-avoidance oracle, and response parsing for the
// remote model. The remote HTTP client lives in remote_backend.hpp.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "react/metrics.hpp"
#include "react/structuring.hpp"
#include "react/types.hpp"

namespace react {

// Per-waypoint (dx, dy) corrections; length always matches the nominal
// plan. reasoning is the decision log (empty when none).
struct ResidualSet {
  std::vector<Vec2> deltas;
  std::string reasoning;
};

enum class BackendKind { null_backend, geometric, remote };

inline std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::null_backend: return "null";
    case BackendKind::geometric: return "geometric";
    case BackendKind::remote: return "remote";
  }
  return "null";
}

inline BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "null") return BackendKind::null_backend;
  if (s == "geometric") return BackendKind::geometric;
  if (s == "remote") return BackendKind::remote;
  throw std::invalid_argument("unknown backend kind: " + s);
}

struct BackendConfig {
  BackendKind kind{BackendKind::geometric};
  std::string endpoint{"http://127.0.0.1:8400"};
  double timeout_s{2.0};
  double max_lateral_offset{3.5};
  double lateral_step{0.5};
  double safety_clearance{5.0};
  int max_new_tokens{256};
};

// Every backend resolves to a residual set; failures keep the nominal plan
// (zero deltas) and are flagged for bookkeeping.
struct PlanResult {
  ResidualSet residuals;
  bool fallback{false};
  std::string error;
};

inline ResidualSet zero_residuals(std::size_t m, std::string reasoning = "") {
  return {std::vector<Vec2>(m, Vec2{}), std::move(reasoning)};
}

namespace detail {

inline std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

// Threat set at the planning timestamps: surrounding-agent predictions plus
// the hazard as a stationary agent.
inline std::vector<Trajectory> make_threats(const std::optional<HazardAlert>& hazard,
                                            const std::vector<Trajectory>& surroundings,
                                            const std::vector<double>& times) {
  std::vector<Trajectory> threats = surroundings;
  if (hazard) {
    Trajectory h;
    h.agent_id = "hazard";
    for (double t : times) {
      h.points.push_back({t, hazard->x, hazard->y});
    }
    threats.push_back(std::move(h));
  }
  return threats;
}

inline Trajectory future_slice(const Trajectory& traj) {
  Trajectory out;
  out.agent_id = traj.agent_id;
  out.points.assign(traj.points.begin() + 1, traj.points.end());
  return out;
}

}  // namespace detail

// Deterministic avoidance stand-in for the fine-tuned model. When the
// validated hazard or a predicted agent encroaches on the nominal path, it
// searches uniform lateral offsets {0, +-step, ..., +-max} over the future
// waypoints plus a stop maneuver, scores candidates by MCD against the
// threat set, and picks the smallest sufficient offset (ties: larger summed
// clearance, then positive y). The first waypoint is the committed current
// position and never moves.
//
// Surroundings must be sampled at the nominal waypoint timestamps.
inline ResidualSet geometric_avoidance(const ContextPackage& ctx, const Trajectory& nominal,
                                       const std::vector<Trajectory>& surroundings,
                                       const BackendConfig& cfg) {
  const std::size_t m = nominal.size();
  if (m == 0) {
    throw std::invalid_argument("geometric_avoidance: empty nominal plan");
  }
  std::vector<double> times;
  times.reserve(m);
  for (const auto& p : nominal.points) {
    times.push_back(p.t);
  }
  const std::vector<Trajectory> threats = detail::make_threats(ctx.hazard, surroundings, times);
  if (threats.empty()) {
    return zero_residuals(m, "No hazard reported and no surrounding agents; keeping nominal plan.");
  }

  const Trajectory nominal_future = detail::future_slice(nominal);
  std::vector<Trajectory> threats_future;
  threats_future.reserve(threats.size());
  for (const Trajectory& t : threats) {
    threats_future.push_back(detail::future_slice(t));
  }

  auto future_clearance = [&](const Trajectory& plan) {
    return nominal_future.empty() ? std::numeric_limits<double>::infinity()
                                  : mcd(plan, threats_future);
  };
  auto summed_clearance = [&](const Trajectory& plan) {
    double sum = 0.0;
    for (std::size_t t = 0; t < plan.size(); ++t) {
      double dmin = std::numeric_limits<double>::infinity();
      for (const Trajectory& th : threats_future) {
        dmin = std::min(dmin, euclidean(plan.points[t].pos(), th.points[t].pos()));
      }
      sum += dmin;
    }
    return sum;
  };

  const double nominal_mcd = future_clearance(nominal_future);
  if (nominal_mcd >= cfg.safety_clearance) {
    return zero_residuals(m, "No hazard or agent within " + detail::fmt1(cfg.safety_clearance) +
                                 " m of the nominal path; keeping nominal plan.");
  }

  std::string trigger;
  if (ctx.hazard && !ctx.ego_history.empty()) {
    const Vec2 rel = ctx.hazard->pos() - nominal.points.front().pos();
    trigger = "Hazard at (" + detail::fmt1(rel.x) + ", " + detail::fmt1(rel.y) +
              ") m relative to the current waypoint; nominal clearance " +
              detail::fmt1(nominal_mcd) + " m.";
  } else if (ctx.hazard) {
    trigger = "Hazard at (" + detail::fmt1(ctx.hazard->x) + ", " + detail::fmt1(ctx.hazard->y) +
              ") m; nominal clearance " + detail::fmt1(nominal_mcd) + " m.";
  } else {
    trigger = "Predicted agent within " + detail::fmt1(cfg.safety_clearance) +
              " m of the nominal path; nominal clearance " + detail::fmt1(nominal_mcd) + " m.";
  }

  // Lateral offset candidates, smallest magnitude first.
  struct Candidate {
    double offset;
    double clearance;
    double aggregate;
  };
  std::optional<Candidate> chosen;
  const int steps = static_cast<int>(std::floor(cfg.max_lateral_offset / cfg.lateral_step + 1e-9));
  for (int i = 0; i <= steps && !chosen; ++i) {
    const double magnitude = i * cfg.lateral_step;
    Candidate best_side{0.0, -1.0, -1.0};
    for (const double offset : {magnitude, -magnitude}) {
      Trajectory cand = nominal_future;
      for (auto& p : cand.points) {
        p.y += offset;
      }
      const double clearance = future_clearance(cand);
      if (clearance < cfg.safety_clearance) {
        continue;
      }
      const double aggregate = summed_clearance(cand);
      if (best_side.clearance < 0.0 || aggregate > best_side.aggregate ||
          (aggregate == best_side.aggregate && offset > best_side.offset)) {
        best_side = {offset, clearance, aggregate};
      }
      if (magnitude == 0.0) {
        break;  // +0 and -0 are the same candidate
      }
    }
    if (best_side.clearance >= 0.0) {
      chosen = best_side;
    }
  }

  ResidualSet out;
  out.deltas.assign(m, Vec2{});
  if (chosen) {
    for (std::size_t j = 1; j < m; ++j) {
      out.deltas[j] = {0.0, chosen->offset};
    }
    const char* side = chosen->offset >= 0.0 ? "right" : "left";
    out.reasoning = trigger + " Shifted remaining waypoints " +
                    detail::fmt1(std::abs(chosen->offset)) + " m " + side +
                    "; predicted clearance " + detail::fmt1(chosen->clearance) + " m.";
    return out;
  }

  // Stop maneuver: hold the last waypoint whose whole prefix stays clear of
  // every threat at its own timestep.
  std::size_t last_safe = 0;
  for (std::size_t j = 1; j < m; ++j) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const Trajectory& th : threats) {
      dmin = std::min(dmin, euclidean(nominal.points[j].pos(), th.points[j].pos()));
    }
    if (dmin < cfg.safety_clearance) {
      break;
    }
    last_safe = j;
  }
  const Vec2 stop_point = nominal.points[last_safe].pos();
  for (std::size_t j = last_safe + 1; j < m; ++j) {
    out.deltas[j] = stop_point - nominal.points[j].pos();
  }
  out.reasoning = trigger + " No lateral offset up to " + detail::fmt1(cfg.max_lateral_offset) +
                  " m restores " + detail::fmt1(cfg.safety_clearance) +
                  " m clearance; stopping at waypoint " + std::to_string(last_safe) + ".";
  return out;
}

enum class ResponseStatus { ok, no_array, length_mismatch, non_finite };

inline std::string to_string(ResponseStatus s) {
  switch (s) {
    case ResponseStatus::ok: return "ok";
    case ResponseStatus::no_array: return "no residual array found";
    case ResponseStatus::length_mismatch: return "residual count mismatch";
    case ResponseStatus::non_finite: return "non-finite residual value";
  }
  return "unknown";
}

struct ParsedResponse {
  ResponseStatus status{ResponseStatus::no_array};
  ResidualSet residuals;
};

namespace detail {

inline bool is_pair_array(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    return false;
  }
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      return false;
    }
  }
  return true;
}

inline std::optional<nlohmann::json> find_pair_array(const std::string& body) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '[') {
      continue;
    }
    int depth = 0;
    for (std::size_t j = i; j < body.size(); ++j) {
      if (body[j] == '[') {
        ++depth;
      } else if (body[j] == ']') {
        --depth;
        if (depth == 0) {
          auto parsed = nlohmann::json::parse(body.substr(i, j - i + 1), nullptr, false);
          if (!parsed.is_discarded() && is_pair_array(parsed)) {
            return std::optional<nlohmann::json>(std::in_place, std::move(parsed));
          }
          break;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Extracts the first well-formed JSON array of numeric pairs from a model
// response, tolerating surrounding free text. A whole-body JSON object with
// "residuals" (and optionally "reasoning") takes precedence.
inline ParsedResponse parse_residual_response(const std::string& body, std::size_t expected_m) {
  ParsedResponse out;
  nlohmann::json array;
  const auto whole = nlohmann::json::parse(body, nullptr, false);
  if (!whole.is_discarded() && whole.is_object() && whole.contains("residuals")) {
    if (!detail::is_pair_array(whole["residuals"])) {
      out.status = ResponseStatus::no_array;
      return out;
    }
    array = whole["residuals"];
    if (whole.contains("reasoning") && whole["reasoning"].is_string()) {
      out.residuals.reasoning = whole["reasoning"].get<std::string>();
    }
  } else {
    const auto found = detail::find_pair_array(body);
    if (!found) {
      out.status = ResponseStatus::no_array;
      return out;
    }
    array = *found;
  }

  if (array.size() != expected_m) {
    out.status = ResponseStatus::length_mismatch;
    return out;
  }
  for (const auto& e : array) {
    const double dx = e[0].get<double>();
    const double dy = e[1].get<double>();
    if (!std::isfinite(dx) || !std::isfinite(dy)) {
      out.status = ResponseStatus::non_finite;
      return out;
    }
    out.residuals.deltas.push_back({dx, dy});
  }
  out.status = ResponseStatus::ok;
  return out;
}

}  // namespace react
