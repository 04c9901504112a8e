// Ego-frame / zero-time alignment and deterministic prompt encoding under
// a word-count + patch-grid token proxy.
//
// Context block grammar (line-oriented, fixed field order):
//   HAZARD x=<f> y=<f> t=<f>   |   HAZARD none
//   NAV n=<int>
//   WP <j> x=<f> y=<f>
//   EGO n=<int>
//   S t=<f> x=<f> y=<f> vx=<f> vy=<f> yaw=<f>
#pragma once

#include <array>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "react/bev.hpp"
#include "react/structuring.hpp"
#include "react/types.hpp"

namespace react {

struct TextPrompt {
  std::string instruction;
  std::string context_block;
  int estimated_tokens{0};
};

struct VisualPrompt {
  BevMap bev_now;
  BevMap bev_past;
  int patch_size{8};
};

inline Vec2 to_ego_frame(const Vec2& point, const Vec2& ego_pos) { return point - ego_pos; }

inline double normalize_time(double t, double t0) { return t - t0; }

inline int count_words(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int n = 0;
  while (in >> word) {
    ++n;
  }
  return n;
}

namespace detail {

inline std::string fmt_num(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

struct ContextLines {
  std::string hazard_line;                      // kept verbatim through reduction
  std::vector<std::array<double, 2>> waypoints; // ego-relative x, y
  std::vector<std::array<double, 6>> ego_rows;  // t, x, y, vx, vy, yaw
};

inline std::string render_context(const ContextLines& c, int decimals) {
  std::string out = c.hazard_line + "\n";
  out += "NAV n=" + std::to_string(c.waypoints.size()) + "\n";
  for (std::size_t j = 0; j < c.waypoints.size(); ++j) {
    out += "WP " + std::to_string(j) + " x=" + fmt_num(c.waypoints[j][0], decimals) +
           " y=" + fmt_num(c.waypoints[j][1], decimals) + "\n";
  }
  out += "EGO n=" + std::to_string(c.ego_rows.size()) + "\n";
  for (const auto& r : c.ego_rows) {
    out += "S t=" + fmt_num(r[0], decimals) + " x=" + fmt_num(r[1], decimals) +
           " y=" + fmt_num(r[2], decimals) + " vx=" + fmt_num(r[3], decimals) +
           " vy=" + fmt_num(r[4], decimals) + " yaw=" + fmt_num(r[5], decimals) + "\n";
  }
  return out;
}

inline double parse_field(const std::string& line, const std::string& key) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos) {
    throw std::invalid_argument("prompt parse: missing field '" + key + "' in: " + line);
  }
  return std::strtod(line.c_str() + pos + key.size() + 1, nullptr);
}

// Inverse of render_context; used by token reduction and round-trip tests.
inline ContextLines parse_context(const std::string& context_block) {
  ContextLines c;
  std::istringstream in(context_block);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("HAZARD", 0) == 0) {
      c.hazard_line = line;
    } else if (line.rfind("WP ", 0) == 0) {
      c.waypoints.push_back({parse_field(line, "x"), parse_field(line, "y")});
    } else if (line.rfind("S ", 0) == 0) {
      c.ego_rows.push_back({parse_field(line, "t"), parse_field(line, "x"),
                            parse_field(line, "y"), parse_field(line, "vx"),
                            parse_field(line, "vy"), parse_field(line, "yaw")});
    }
  }
  if (c.hazard_line.empty()) {
    throw std::invalid_argument("prompt parse: missing HAZARD line");
  }
  return c;
}

}  // namespace detail

// Serializes the context package with all coordinates relative to the
// current ego position and all times relative to t_now. Byte-identical for
// identical inputs.
inline TextPrompt encode_text_prompt(const ContextPackage& ctx, const std::string& instruction,
                                     int decimals = 2) {
  const Vec2 ego_pos = ctx.ego_history.empty() ? Vec2{} : ctx.ego_history.back().pos();
  detail::ContextLines lines;
  if (ctx.hazard) {
    const Vec2 rel = to_ego_frame(ctx.hazard->pos(), ego_pos);
    lines.hazard_line = "HAZARD x=" + detail::fmt_num(rel.x, decimals) +
                        " y=" + detail::fmt_num(rel.y, decimals) +
                        " t=" + detail::fmt_num(normalize_time(ctx.hazard->t_h, ctx.t_now), decimals);
  } else {
    lines.hazard_line = "HAZARD none";
  }
  for (const Vec3& wp : ctx.nav_eff) {
    const Vec2 rel = to_ego_frame(wp.xy(), ego_pos);
    lines.waypoints.push_back({rel.x, rel.y});
  }
  for (const VehicleState& s : ctx.ego_history) {
    const Vec2 rel = to_ego_frame(s.pos(), ego_pos);
    lines.ego_rows.push_back({normalize_time(state_time(s, ctx.dt), ctx.t_now), rel.x, rel.y,
                              s.vx, s.vy, s.yaw});
  }
  TextPrompt tp;
  tp.instruction = instruction;
  tp.context_block = detail::render_context(lines, decimals);
  tp.estimated_tokens = count_words(instruction) + count_words(tp.context_block);
  return tp;
}

inline int visual_token_count(const VisualPrompt& vp) {
  const GridSpec& g = vp.bev_now.grid;
  if (vp.patch_size <= 0 || g.width % vp.patch_size != 0 || g.height % vp.patch_size != 0) {
    throw std::invalid_argument("visual_token_count: patch size must divide BEV dimensions");
  }
  return 2 * (g.width / vp.patch_size) * (g.height / vp.patch_size);
}

inline int estimate_tokens(const TextPrompt& tp, const VisualPrompt& vp) {
  return tp.estimated_tokens + visual_token_count(vp);
}

struct ReduceResult {
  TextPrompt prompt;
  bool over_budget{false};
};

// Shrinks the text prompt to the token budget by, in order: rounding
// coordinates to one decimal, thinning the ego history to every other
// sample (newest kept), and truncating waypoints from the tail down to two.
// The HAZARD line is preserved verbatim and token count never increases.
inline ReduceResult reduce_tokens(const TextPrompt& tp, int budget) {
  if (budget <= 0) {
    throw std::invalid_argument("reduce_tokens: budget must be positive");
  }
  if (tp.estimated_tokens <= budget) {
    return {tp, false};
  }

  detail::ContextLines lines = detail::parse_context(tp.context_block);
  const int instruction_tokens = count_words(tp.instruction);
  int decimals = 1;  // stage 1: coarser numbers

  auto rebuild = [&]() {
    TextPrompt out;
    out.instruction = tp.instruction;
    out.context_block = detail::render_context(lines, decimals);
    out.estimated_tokens = instruction_tokens + count_words(out.context_block);
    return out;
  };

  TextPrompt cur = rebuild();
  if (cur.estimated_tokens <= budget) {
    return {cur, false};
  }

  // stage 2: keep every other history sample, anchored at the newest
  if (lines.ego_rows.size() > 1) {
    std::vector<std::array<double, 6>> thinned;
    for (std::size_t i = (lines.ego_rows.size() - 1) % 2; i < lines.ego_rows.size(); i += 2) {
      thinned.push_back(lines.ego_rows[i]);
    }
    lines.ego_rows = std::move(thinned);
    cur = rebuild();
    if (cur.estimated_tokens <= budget) {
      return {cur, false};
    }
  }

  // stage 3: drop waypoints from the tail, never below two
  while (lines.waypoints.size() > 2) {
    lines.waypoints.pop_back();
    cur = rebuild();
    if (cur.estimated_tokens <= budget) {
      return {cur, false};
    }
  }

  return {cur, true};
}

}  // namespace react
