// Command-line harness: scenario generation, single-run pipeline execution,
// batch evaluation, SFT dataset export, plot emission, and latency bench.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "react/evaluate.hpp"
#include "react/pipeline.hpp"
#include "react/plot.hpp"
#include "react/scenario_gen.hpp"
#include "react/scenario_io.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> sorted_files(const std::string& dir, const std::string& ext) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_generate(std::uint64_t seed, const std::string& profile_str, const std::string& out_dir,
                 int count) {
  react::ScenarioProfile profile = react::profile_from_string(profile_str);
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    profile.seed = seed + static_cast<std::uint64_t>(i);
    const react::Scenario scenario = react::generate_scenario(profile);
    const std::string path =
        (fs::path(out_dir) / ("scenario_" + std::to_string(profile.seed) + ".json")).string();
    react::save_scenario(scenario, path);
    std::cout << path << "\n";
  }
  return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& backend,
            const std::string& endpoint, const std::string& config_path,
            const std::string& out_path) {
  react::HarnessConfig cfg =
      config_path.empty() ? react::HarnessConfig{} : react::load_config(config_path);
  cfg.backend.kind = react::backend_kind_from_string(backend);
  if (!endpoint.empty()) {
    cfg.backend.endpoint = endpoint;
  }
  const react::Scenario scenario = react::load_scenario(scenario_path);
  const std::string id = fs::path(scenario_path).stem().string();
  const react::RunResult rr = react::run_pipeline(scenario, id, cfg);
  react::save_run_result(rr, out_path);
  std::cout << "run " << id << " backend=" << rr.backend
            << " tokens=" << rr.prompt_tokens << " fallback=" << (rr.fallback ? 1 : 0)
            << " total_ms=" << rr.latency_ms.at("total") << "\n";
  return 0;
}

int cmd_eval(const std::string& runs_dir, const std::string& report_path) {
  std::vector<react::RunResult> runs;
  for (const std::string& path : sorted_files(runs_dir, ".json")) {
    runs.push_back(react::load_run_result(path));
  }
  const react::Report rep = react::evaluate(runs);
  {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) {
      throw std::runtime_error("eval: cannot open " + report_path);
    }
    f << react::report_to_json(rep).dump(2) << '\n';
  }
  const std::string csv_path = fs::path(report_path).replace_extension(".csv").string();
  {
    std::ofstream f(csv_path, std::ios::binary);
    f << react::report_to_csv(rep);
  }
  std::cout << react::report_to_json(rep).dump(2) << "\n";
  std::cout << "wrote " << report_path << " and " << csv_path << "\n";
  return 0;
}

int cmd_export_sft(const std::string& scenarios_dir, const std::string& out_path,
                   const std::string& config_path) {
  const react::HarnessConfig cfg =
      config_path.empty() ? react::HarnessConfig{} : react::load_config(config_path);
  std::vector<react::SftRecord> records;
  for (const std::string& path : sorted_files(scenarios_dir, ".json")) {
    records.push_back(react::make_sft_record(react::load_scenario(path), cfg));
  }
  const std::size_t n = react::export_jsonl(records, out_path);
  std::cout << "wrote " << n << " records to " << out_path << "\n";
  return 0;
}

int cmd_plot(const std::string& run_path, const std::string& out_path) {
  react::emit_plot(react::load_run_result(run_path), out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_bench(const std::string& scenario_path, int reps, const std::string& config_path) {
  react::HarnessConfig cfg =
      config_path.empty() ? react::HarnessConfig{} : react::load_config(config_path);
  if (cfg.backend.kind == react::BackendKind::remote) {
    throw std::runtime_error("bench: remote backend latency is not benched here");
  }
  const react::Scenario scenario = react::load_scenario(scenario_path);
  for (int i = 0; i < 3; ++i) {  // warm-up
    react::run_pipeline(scenario, "bench", cfg);
  }
  std::vector<react::RunResult> results;
  results.reserve(static_cast<std::size_t>(reps));
  const double total_ms = react::measure_latency_ms(
      [&] { results.push_back(react::run_pipeline(scenario, "bench", cfg)); }, reps);
  auto stage_median = [&](const std::string& stage) {
    std::vector<double> xs;
    for (const react::RunResult& rr : results) {
      xs.push_back(rr.latency_ms.at(stage));
    }
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  };
  nlohmann::ordered_json j;
  j["reps"] = reps;
  j["backend"] = react::to_string(cfg.backend.kind);
  for (const char* stage : {"structuring", "bev", "prompt", "plan", "rtf", "total"}) {
    j[std::string("median_ms_") + stage] = stage_median(stage);
  }
  j["median_ms_end_to_end"] = total_ms;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative trajectory-refinement simulator"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate seeded synthetic scenarios");
  std::uint64_t seed = 0;
  std::string profile = "small_town:clear:noon:3";
  std::string out_dir = "scenarios";
  int count = 1;
  gen->add_option("--seed", seed, "Base seed");
  gen->add_option("--profile", profile, "location:weather:time_of_day:density");
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--count", count, "Number of scenarios (seeds seed..seed+count-1)");

  auto* run = app.add_subcommand("run", "Run the pipeline on one scenario");
  std::string scenario_path;
  std::string backend = "geometric";
  std::string endpoint;
  std::string config_path;
  std::string out_path = "run.json";
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--backend", backend, "null|geometric|remote");
  run->add_option("--endpoint", endpoint, "Remote backend URL");
  run->add_option("--config", config_path, "Flat key-value config file");
  run->add_option("--out", out_path, "Run result JSON")->required();

  auto* ev = app.add_subcommand("eval", "Aggregate run results into a report");
  std::string runs_dir;
  std::string report_path = "report.json";
  ev->add_option("--runs", runs_dir, "Directory of run result JSON files")->required();
  ev->add_option("--report", report_path, "Report JSON output (CSV written alongside)")
      ->required();

  auto* sft = app.add_subcommand("export-sft", "Export instruction-tuning records");
  std::string scenarios_dir;
  std::string sft_out = "sft.jsonl";
  std::string sft_config;
  sft->add_option("--scenarios", scenarios_dir, "Directory of scenario JSON files")->required();
  sft->add_option("--out", sft_out, "JSONL output path")->required();
  sft->add_option("--config", sft_config, "Flat key-value config file");

  auto* plot = app.add_subcommand("plot", "Render a run result as PGM");
  std::string plot_run;
  std::string plot_out = "run.pgm";
  plot->add_option("--run", plot_run, "Run result JSON")->required();
  plot->add_option("--out", plot_out, "PGM output path")->required();

  auto* bench = app.add_subcommand("bench", "Median per-stage pipeline latency");
  std::string bench_scenario;
  int reps = 30;
  std::string bench_config;
  bench->add_option("--scenario", bench_scenario, "Scenario JSON")->required();
  bench->add_option("--reps", reps, "Repetitions (>= 1)");
  bench->add_option("--config", bench_config, "Flat key-value config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(seed, profile, out_dir, count);
    }
    if (run->parsed()) {
      return cmd_run(scenario_path, backend, endpoint, config_path, out_path);
    }
    if (ev->parsed()) {
      return cmd_eval(runs_dir, report_path);
    }
    if (sft->parsed()) {
      return cmd_export_sft(scenarios_dir, sft_out, sft_config);
    }
    if (plot->parsed()) {
      return cmd_plot(plot_run, plot_out);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_scenario, reps, bench_config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
