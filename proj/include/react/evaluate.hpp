// Batch evaluation: per-scenario metric scoring over the 2 s horizon,
// suite aggregation with weather/time and location buckets, and collision
// rate reduction of the evaluated backend against the null baseline.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "react/metrics.hpp"
#include "react/pipeline.hpp"

namespace react {

struct ScenarioScores {
  std::string scenario_id;
  std::string backend;
  ScenarioMeta meta;
  double vpq{0.0};
  double miou{0.0};
  double min_ade_1s{0.0};
  double min_ade_2s{0.0};
  double min_fde{0.0};
  double collision_rate{0.0};
  std::vector<int> collision_flags;
  std::optional<double> mcd;
  double latency_total_ms{0.0};
  int prompt_tokens{0};
  bool fallback{false};
};

struct BucketStats {
  int scenarios{0};
  double vpq{0.0};
  double miou{0.0};
  double min_ade_2s{0.0};
  double collision_rate{0.0};
  std::optional<double> crr;
  std::optional<double> mcd;
};

struct Report {
  std::string backend;
  int scenarios{0};
  int warnings{0};
  double vpq{0.0};
  double miou{0.0};
  double min_ade_1s{0.0};
  double min_ade_2s{0.0};
  double min_fde{0.0};
  double collision_rate{0.0};
  std::optional<double> crr;
  std::optional<double> mcd;
  std::map<std::string, double> latency_ms;
  std::map<std::string, BucketStats> buckets;
  std::vector<ScenarioScores> rows;  // every run, baseline included
};

// Evaluated future frames: 2 s at the 0.5 s waypoint cadence.
inline int evaluated_frames(const RunResult& rr) {
  return std::min(4, static_cast<int>(rr.plan_times.size()) - 1);
}

// Threat trajectories over frames 1..frames: actual agent tracks plus the
// crash site as a stationary agent.
inline std::vector<Trajectory> threat_trajectories(const RunResult& rr, int frames) {
  std::vector<Trajectory> threats;
  for (const auto& [id, samples] : rr.actual_agents) {
    Trajectory t;
    t.agent_id = id;
    for (int f = 1; f <= frames; ++f) {
      t.points.push_back({rr.plan_times[static_cast<std::size_t>(f)],
                          samples[static_cast<std::size_t>(f)].x,
                          samples[static_cast<std::size_t>(f)].y});
    }
    threats.push_back(std::move(t));
  }
  if (rr.hazard_xy) {
    Trajectory h;
    h.agent_id = "hazard";
    for (int f = 1; f <= frames; ++f) {
      h.points.push_back({rr.plan_times[static_cast<std::size_t>(f)], rr.hazard_xy->x,
                          rr.hazard_xy->y});
    }
    threats.push_back(std::move(h));
  }
  return threats;
}

inline ScenarioScores score_run(const RunResult& rr, double collision_threshold = 5.0) {
  const int frames = evaluated_frames(rr);
  if (frames < 1) {
    throw std::invalid_argument("score_run: no future frames to evaluate");
  }
  if (rr.safe.size() != rr.optimized.size() || rr.safe.empty()) {
    throw std::invalid_argument("score_run: missing ground-truth safe plan");
  }

  ScenarioScores sc;
  sc.scenario_id = rr.scenario_id;
  sc.backend = rr.backend;
  sc.meta = rr.meta;
  sc.prompt_tokens = rr.prompt_tokens;
  sc.fallback = rr.fallback;
  const auto it = rr.latency_ms.find("total");
  sc.latency_total_ms = it == rr.latency_ms.end() ? 0.0 : it->second;

  auto slice = [&](const std::vector<Vec2>& plan, int first, int last) {
    Trajectory t;
    for (int f = first; f <= last; ++f) {
      t.points.push_back({rr.plan_times[static_cast<std::size_t>(f)],
                          plan[static_cast<std::size_t>(f)].x,
                          plan[static_cast<std::size_t>(f)].y});
    }
    return t;
  };
  const Trajectory ego = slice(rr.optimized, 1, frames);
  const Trajectory gt = slice(rr.safe, 1, frames);

  const std::vector<Trajectory> threats = threat_trajectories(rr, frames);
  const CollisionResult coll = collision_rate(ego, threats, collision_threshold);
  sc.collision_rate = coll.rate;
  sc.collision_flags = coll.record.flags;
  if (!threats.empty()) {
    sc.mcd = mcd(ego, threats);
  }

  const int frames_1s = std::min(2, frames);
  sc.min_ade_1s = min_ade({slice(rr.optimized, 1, frames_1s)}, slice(rr.safe, 1, frames_1s));
  sc.min_ade_2s = min_ade({ego}, gt);
  sc.min_fde = min_fde({ego}, gt);

  const auto [pred_masks, gt_masks] = build_motion_masks(rr, frames);
  sc.vpq = vpq(pred_masks, gt_masks);
  auto union_mask = [](const MotionMaskSeq& seq) {
    BinaryMask m = seq.front();
    for (std::size_t i = 1; i < seq.size(); ++i) {
      for (std::size_t c = 0; c < m.cells.size(); ++c) {
        m.cells[c] = m.cells[c] || seq[i].cells[c];
      }
    }
    return m;
  };
  sc.miou = miou({{union_mask(pred_masks), union_mask(gt_masks)}});

  return sc;
}

namespace detail {

inline double frame_collision_rate(const std::vector<ScenarioScores>& rows) {
  std::size_t flags = 0;
  std::size_t frames = 0;
  for (const ScenarioScores& sc : rows) {
    for (int f : sc.collision_flags) {
      flags += static_cast<std::size_t>(f);
    }
    frames += sc.collision_flags.size();
  }
  return frames == 0 ? 0.0 : static_cast<double>(flags) / static_cast<double>(frames);
}

inline double mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) {
    return 0.0;
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace detail

// Scores every run, aggregates the evaluated backend (the non-null one when
// present), and derives CRR against null-backend runs of the same suite.
// Runs that cannot be scored are skipped and counted as warnings.
inline Report evaluate(const std::vector<RunResult>& runs, double collision_threshold = 5.0) {
  if (runs.empty()) {
    throw std::invalid_argument("evaluate: no runs");
  }
  Report rep;
  std::set<std::string> backends;
  for (const RunResult& rr : runs) {
    try {
      rep.rows.push_back(score_run(rr, collision_threshold));
      backends.insert(rr.backend);
    } catch (const std::exception&) {
      ++rep.warnings;
    }
  }
  if (rep.rows.empty()) {
    throw std::invalid_argument("evaluate: no scorable runs");
  }

  rep.backend = "null";
  for (const std::string& b : backends) {
    if (b != "null") {
      rep.backend = b;
      break;
    }
  }

  std::vector<ScenarioScores> chosen;
  std::vector<ScenarioScores> baseline;
  for (const ScenarioScores& sc : rep.rows) {
    if (sc.backend == rep.backend) {
      chosen.push_back(sc);
    } else if (sc.backend == "null") {
      baseline.push_back(sc);
    }
  }

  rep.scenarios = static_cast<int>(chosen.size());
  auto collect = [&](auto&& get) {
    std::vector<double> xs;
    for (const ScenarioScores& sc : chosen) {
      xs.push_back(get(sc));
    }
    return xs;
  };
  rep.vpq = detail::mean(collect([](const auto& s) { return s.vpq; }));
  rep.miou = detail::mean(collect([](const auto& s) { return s.miou; }));
  rep.min_ade_1s = detail::mean(collect([](const auto& s) { return s.min_ade_1s; }));
  rep.min_ade_2s = detail::mean(collect([](const auto& s) { return s.min_ade_2s; }));
  rep.min_fde = detail::mean(collect([](const auto& s) { return s.min_fde; }));
  rep.collision_rate = detail::frame_collision_rate(chosen);
  std::vector<double> mcds;
  for (const ScenarioScores& sc : chosen) {
    if (sc.mcd) {
      mcds.push_back(*sc.mcd);
    }
  }
  if (!mcds.empty()) {
    rep.mcd = detail::mean(mcds);
  }
  if (!baseline.empty() && rep.backend != "null") {
    const double c_base = detail::frame_collision_rate(baseline);
    if (c_base > 0.0) {
      rep.crr = crr(c_base, rep.collision_rate);
    }
  }
  rep.latency_ms["total"] =
      detail::median(collect([](const auto& s) { return s.latency_total_ms; }));

  auto add_to_buckets = [&](const ScenarioScores& sc, const std::string& key) {
    BucketStats& b = rep.buckets[key];
    const double n = static_cast<double>(b.scenarios);
    b.vpq = (b.vpq * n + sc.vpq) / (n + 1.0);
    b.miou = (b.miou * n + sc.miou) / (n + 1.0);
    b.min_ade_2s = (b.min_ade_2s * n + sc.min_ade_2s) / (n + 1.0);
    if (sc.mcd) {
      b.mcd = b.mcd ? (*b.mcd * n + *sc.mcd) / (n + 1.0) : *sc.mcd;
    }
    ++b.scenarios;
  };
  std::map<std::string, std::vector<ScenarioScores>> bucket_chosen;
  std::map<std::string, std::vector<ScenarioScores>> bucket_baseline;
  for (const ScenarioScores& sc : chosen) {
    const std::string wkey = sc.meta.weather + "|" + sc.meta.time_of_day;
    const std::string lkey = "location:" + sc.meta.location;
    add_to_buckets(sc, wkey);
    add_to_buckets(sc, lkey);
    bucket_chosen[wkey].push_back(sc);
    bucket_chosen[lkey].push_back(sc);
  }
  for (const ScenarioScores& sc : baseline) {
    bucket_baseline[sc.meta.weather + "|" + sc.meta.time_of_day].push_back(sc);
    bucket_baseline["location:" + sc.meta.location].push_back(sc);
  }
  for (auto& [key, stats] : rep.buckets) {
    stats.collision_rate = detail::frame_collision_rate(bucket_chosen[key]);
    const auto base_it = bucket_baseline.find(key);
    if (base_it != bucket_baseline.end() && rep.backend != "null") {
      const double c_base = detail::frame_collision_rate(base_it->second);
      if (c_base > 0.0) {
        stats.crr = crr(c_base, stats.collision_rate);
      }
    }
  }
  return rep;
}

inline nlohmann::ordered_json report_to_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["vpq"] = rep.vpq;
  j["miou"] = rep.miou;
  j["min_ade_1s"] = rep.min_ade_1s;
  j["min_ade_2s"] = rep.min_ade_2s;
  j["min_fde"] = rep.min_fde;
  j["collision_rate"] = rep.collision_rate;
  if (rep.crr) {
    j["crr"] = *rep.crr;
  } else {
    j["crr"] = nullptr;
  }
  if (rep.mcd) {
    j["mcd"] = *rep.mcd;
  } else {
    j["mcd"] = nullptr;
  }
  j["latency_ms"] = rep.latency_ms;
  j["backend"] = rep.backend;
  j["scenarios"] = rep.scenarios;
  j["warnings"] = rep.warnings;
  auto buckets = nlohmann::ordered_json::object();
  for (const auto& [key, b] : rep.buckets) {
    nlohmann::ordered_json bj;
    bj["scenarios"] = b.scenarios;
    bj["vpq"] = b.vpq;
    bj["miou"] = b.miou;
    bj["min_ade_2s"] = b.min_ade_2s;
    bj["collision_rate"] = b.collision_rate;
    bj["crr"] = b.crr ? nlohmann::ordered_json(*b.crr) : nlohmann::ordered_json(nullptr);
    bj["mcd"] = b.mcd ? nlohmann::ordered_json(*b.mcd) : nlohmann::ordered_json(nullptr);
    buckets[key] = std::move(bj);
  }
  j["buckets"] = std::move(buckets);
  return j;
}

// One flat row per scenario run.
inline std::string report_to_csv(const Report& rep) {
  std::ostringstream out;
  out << "scenario_id,backend,weather,time_of_day,location,vpq,miou,min_ade_1s,min_ade_2s,"
         "min_fde,collision_rate,mcd,latency_total_ms,prompt_tokens,fallback\n";
  for (const ScenarioScores& sc : rep.rows) {
    out << sc.scenario_id << ',' << sc.backend << ',' << sc.meta.weather << ','
        << sc.meta.time_of_day << ',' << sc.meta.location << ',' << sc.vpq << ',' << sc.miou
        << ',' << sc.min_ade_1s << ',' << sc.min_ade_2s << ',' << sc.min_fde << ','
        << sc.collision_rate << ',';
    if (sc.mcd) {
      out << *sc.mcd;
    }
    out << ',' << sc.latency_total_ms << ',' << sc.prompt_tokens << ','
        << (sc.fallback ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace react
