// HTTP client for a remote planner service. One POST /plan per call; any
// transport, status, or parse failure falls back to zero residuals so the
// vehicle keeps its nominal plan.
#pragma once

#include <cmath>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "react/alignment.hpp"
#include "react/planner.hpp"
#include "react/util.hpp"

namespace react {

inline nlohmann::ordered_json make_plan_request(const TextPrompt& tp, const VisualPrompt& vp,
                                                std::size_t num_waypoints,
                                                const BackendConfig& cfg) {
  nlohmann::ordered_json req;
  req["instruction"] = tp.instruction;
  req["text_prompt"] = tp.context_block;
  req["images"] = {base64_encode(encode_pgm(vp.bev_now)), base64_encode(encode_pgm(vp.bev_past))};
  req["num_waypoints"] = num_waypoints;
  req["max_new_tokens"] = cfg.max_new_tokens;
  return req;
}

inline PlanResult remote_plan(const TextPrompt& tp, const VisualPrompt& vp,
                              std::size_t num_waypoints, const BackendConfig& cfg) {
  PlanResult out;
  out.residuals = zero_residuals(num_waypoints);

  httplib::Client client(cfg.endpoint);
  const auto secs = static_cast<time_t>(cfg.timeout_s);
  const auto usecs = static_cast<time_t>((cfg.timeout_s - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const std::string body = make_plan_request(tp, vp, num_waypoints, cfg).dump();
  const httplib::Result res = client.Post("/plan", body, "application/json");
  if (!res) {
    out.fallback = true;
    out.error = "transport: " + httplib::to_string(res.error());
    return out;
  }
  if (res->status != 200) {
    out.fallback = true;
    out.error = "http status " + std::to_string(res->status);
    return out;
  }
  ParsedResponse parsed = parse_residual_response(res->body, num_waypoints);
  if (parsed.status != ResponseStatus::ok) {
    out.fallback = true;
    out.error = "response: " + to_string(parsed.status);
    return out;
  }
  out.residuals = std::move(parsed.residuals);
  return out;
}

}  // namespace react
