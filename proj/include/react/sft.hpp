// Supervised fine-tuning record assembly and JSONL export for training the
// external planner model.
#pragma once

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "react/alignment.hpp"
#include "react/structuring.hpp"
#include "react/types.hpp"
#include "react/util.hpp"

namespace react {

struct SftRecord {
  std::string instruction;
  std::string text_prompt;
  std::array<std::string, 2> images;  // base64 PGM: now, past
  std::string reasoning;
  std::vector<Vec2> targets;
};

// Target residuals: safe_j - nominal_j elementwise.
inline std::vector<Vec2> gt_residuals(const std::vector<Vec2>& nominal,
                                      const std::vector<Vec2>& safe) {
  if (nominal.size() != safe.size()) {
    throw std::invalid_argument("gt_residuals: plan length mismatch");
  }
  std::vector<Vec2> out;
  out.reserve(nominal.size());
  for (std::size_t j = 0; j < nominal.size(); ++j) {
    out.push_back(safe[j] - nominal[j]);
  }
  return out;
}

// Assembles one training record from the prompts, the oracle-produced safe
// plan, and the oracle decision log standing in for a written trace.
inline SftRecord build_sft_record(const ContextPackage& ctx, const TextPrompt& tp,
                                  const VisualPrompt& vp, const std::vector<Vec2>& safe_plan,
                                  const std::string& reasoning) {
  std::vector<Vec2> nominal;
  nominal.reserve(ctx.nav_eff.size());
  for (const Vec3& wp : ctx.nav_eff) {
    nominal.push_back(wp.xy());
  }
  SftRecord rec;
  rec.instruction = tp.instruction;
  rec.text_prompt = tp.context_block;
  rec.images = {base64_encode(encode_pgm(vp.bev_now)), base64_encode(encode_pgm(vp.bev_past))};
  rec.reasoning = reasoning;
  rec.targets = gt_residuals(nominal, safe_plan);
  return rec;
}

inline nlohmann::ordered_json record_to_json(const SftRecord& rec) {
  nlohmann::ordered_json j;
  j["instruction"] = rec.instruction;
  j["text_prompt"] = rec.text_prompt;
  j["images"] = {rec.images[0], rec.images[1]};
  j["reasoning"] = rec.reasoning;
  auto targets = nlohmann::ordered_json::array();
  for (const Vec2& t : rec.targets) {
    targets.push_back({t.x, t.y});
  }
  j["targets"] = std::move(targets);
  return j;
}

inline SftRecord record_from_json(const nlohmann::json& j) {
  SftRecord rec;
  rec.instruction = j.at("instruction").get<std::string>();
  rec.text_prompt = j.at("text_prompt").get<std::string>();
  rec.images = {j.at("images").at(0).get<std::string>(), j.at("images").at(1).get<std::string>()};
  rec.reasoning = j.at("reasoning").get<std::string>();
  for (const auto& t : j.at("targets")) {
    rec.targets.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
  }
  return rec;
}

// One record per line, UTF-8, stable key order. Returns the line count.
inline std::size_t export_jsonl(const std::vector<SftRecord>& records, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("export_jsonl: cannot open " + path);
  }
  for (const SftRecord& rec : records) {
    f << record_to_json(rec).dump() << '\n';
  }
  f.flush();
  if (!f) {
    throw std::runtime_error("export_jsonl: write failed for " + path);
  }
  return records.size();
}

inline std::vector<SftRecord> load_jsonl(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("load_jsonl: cannot open " + path);
  }
  std::vector<SftRecord> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) {
      continue;
    }
    out.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace react
