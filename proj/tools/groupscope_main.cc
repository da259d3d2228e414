// Copyright 2026 The groupscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line driver: detect-groups, evaluate, sweep, synth, export-pairs.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "groupscope/error.h"
#include "groupscope/evaluation.h"
#include "groupscope/pipeline.h"
#include "groupscope/run_config.h"
#include "groupscope/scene_io.h"
#include "groupscope/synth.h"

namespace fs = std::filesystem;
using namespace groupscope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRemoteUnavailable = 2;

constexpr const char* kThresholdNote =
    "Thresholds: --tau-d is the normalized center distance between two "
    "person boxes (Euclidean distance / image diagonal, range [0, 1]); "
    "--tau-z is the absolute difference of their median depths (range "
    "[0, 255]). A pair is skipped when its value is strictly greater than "
    "the threshold; --tau-d 1 --tau-z 255 disables filtering.";

// The JSON config must be merged before flags are bound, so --config is
// located by scanning argv directly.
std::string FindConfigPath(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void AddRunFlags(CLI::App* sub, RunConfig& cfg, std::string& config_path) {
  sub->add_option("--config", config_path,
                  "JSON config file; flags override its values");
  sub->add_option("--manifest", cfg.manifest, "Scene manifest (JSON lines)");
  sub->add_option("--backend", cfg.backend, "remote | heuristic | oracle")
      ->check(CLI::IsMember({"remote", "heuristic", "oracle"}));
  sub->add_option("--tau-det", cfg.tau_det,
                  "Minimum detection confidence kept, [0, 1]");
  sub->add_option("--tau-d", cfg.tau_d, "Distance threshold, [0, 1]");
  sub->add_option("--tau-z", cfg.tau_z, "Depth-difference threshold, [0, 255]");
  sub->add_option("--pad-fraction", cfg.pad_fraction,
                  "Union-box padding per side, fraction of box size");
  sub->add_option("--w-yes", cfg.w_yes, "Agreement weight of Yes (> 0)");
  sub->add_option("--w-no", cfg.w_no, "Agreement weight of No (<= 0)");
  sub->add_option("--w-notsure", cfg.w_notsure,
                  "Agreement weight of Not sure (<= 0)");
  sub->add_option("--prompt-template", cfg.prompt_template,
                  "Prompt template with {z_a}, {z_b}, {z_diff}");
  sub->add_option("--classifier-url", cfg.classifier_url,
                  "Remote classifier base URL (default: $MINGLE_CLASSIFIER_URL)");
  sub->add_option("--timeout-ms", cfg.timeout_ms, "Per-request timeout");
  sub->add_option("--max-retries", cfg.max_retries, "Retries per request");
  sub->add_option("--max-inflight", cfg.max_inflight,
                  "Concurrent remote requests");
  sub->add_option("--backoff-base-ms", cfg.backoff_base_ms,
                  "First retry delay; doubles per retry");
  sub->add_option("--heuristic-max-distance", cfg.heuristic_max_distance,
                  "Heuristic backend: max normalized distance for Yes");
  sub->add_option("--heuristic-max-depth-diff", cfg.heuristic_max_depth_diff,
                  "Heuristic backend: max depth difference for Yes");
  sub->add_option("--out-dir", cfg.out_dir, "Output directory");
  sub->add_option("--jobs", cfg.jobs, "Scenes processed concurrently");
  sub->add_option("--seed", cfg.seed, "Seed for all randomness");
  sub->footer(kThresholdNote);
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }
}

std::vector<Scene> LoadManifest(const RunConfig& cfg) {
  if (cfg.manifest.empty()) {
    throw Error(ErrorCode::kConfigError, "--manifest is required");
  }
  std::vector<ManifestIssue> issues;
  std::vector<Scene> scenes = LoadScenes(cfg.manifest, &issues);
  for (const ManifestIssue& issue : issues) {
    spdlog::error("{}:{}: skipped: {}", cfg.manifest, issue.line, issue.message);
  }
  return scenes;
}

void PrintSummary(const RunSummary& s) {
  fmt::print("scenes            {} ({} failed)\n", s.scenes, s.failed_scenes);
  fmt::print("persons           {} kept of {}\n", s.persons_kept, s.persons_in);
  fmt::print("pairs             {}\n", s.pairs);
  fmt::print("filtered distance {}\n", s.filter.filtered_distance);
  fmt::print("filtered depth    {}\n", s.filter.filtered_depth);
  fmt::print("classifier calls  {}\n", s.filter.classified);
  fmt::print("groups            {}\n", s.groups);
  if (s.unparsed_answers > 0) {
    fmt::print("unparsed answers  {}\n", s.unparsed_answers);
  }
}

void WriteJson(const nlohmann::json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("failed writing {}", path.string()));
  }
}

int CmdDetectGroups(const RunConfig& cfg) {
  cfg.Validate();
  const std::vector<Scene> scenes = LoadManifest(cfg);
  auto backend = cfg.MakeBackend();
  const PipelineResult result =
      RunPipeline(scenes, cfg.ToPipelineConfig(), *backend);
  EnsureDir(cfg.out_dir);
  const fs::path results_path = fs::path(cfg.out_dir) / "results.jsonl";
  WriteResults(result.Groups(), results_path);
  WriteJson(result.summary.ToJson(),
            fs::path(cfg.out_dir) / "run_summary.json");
  PrintSummary(result.summary);
  fmt::print("results           {}\n", results_path.string());
  return kExitOk;
}

int CmdExportPairs(const RunConfig& cfg, const std::string& out_path) {
  cfg.Validate();
  const std::vector<Scene> scenes = LoadManifest(cfg);
  auto backend = cfg.MakeBackend();
  const PipelineResult result =
      RunPipeline(scenes, cfg.ToPipelineConfig(), *backend);
  std::vector<Scene> kept;
  std::vector<RelationMatrix> matrices;
  for (const SceneOutcome& o : result.outcomes) {
    if (!o.ok) continue;
    kept.push_back(o.scene);
    matrices.push_back(o.matrix);
  }
  fs::path path = out_path;
  if (path.empty()) {
    EnsureDir(cfg.out_dir);
    path = fs::path(cfg.out_dir) / "pair_records.jsonl";
  }
  ExportPairRecords(kept, matrices, path);
  fmt::print("pair records      {} -> {}\n",
             CollectPairRecords(kept, matrices).size(), path.string());
  return kExitOk;
}

int CmdSweep(const RunConfig& cfg, const std::string& out_path) {
  cfg.Validate();
  const std::vector<Scene> scenes = LoadManifest(cfg);
  auto backend = cfg.MakeBackend();
  std::vector<Scene> prepared;
  std::vector<RelationMatrix> unfiltered;
  for (const Scene& scene : scenes) {
    try {
      PreparedScene p = PrepareScene(scene, cfg.tau_det, backend->needs_imagery());
      unfiltered.push_back(BuildUnfilteredMatrix(
          p.scene, *backend, p.imagery ? &*p.imagery : nullptr));
      prepared.push_back(std::move(p.scene));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kRemoteUnavailable) throw;
      spdlog::error("scene '{}' skipped: {}", scene.scene_id, e.what());
    }
  }
  const auto rows =
      Sweep(prepared, unfiltered, SweepGrid::Default(),
            cfg.ToPipelineConfig().weights);
  if (out_path == "-") {
    WriteSweepCsv(rows, std::cout);
    return kExitOk;
  }
  fs::path path = out_path;
  if (path.empty()) {
    EnsureDir(cfg.out_dir);
    path = fs::path(cfg.out_dir) / "sweep.csv";
  }
  std::ofstream out(path, std::ios::trunc);
  WriteSweepCsv(rows, out);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("failed writing {}", path.string()));
  }
  fmt::print("sweep rows        {} -> {}\n", rows.size(), path.string());
  return kExitOk;
}

int CmdEvaluate(const std::string& predictions, const std::string& manifest,
                double iou_threshold, const std::string& report_path) {
  const std::vector<Scene> scenes = LoadScenes(manifest);
  const std::vector<SceneGroups> preds = LoadResults(predictions);
  const EvalReport report = Evaluate(scenes, preds, iou_threshold);
  PrintReport(report, std::cout);
  const fs::path path =
      report_path.empty()
          ? fs::path(predictions).parent_path() / "eval_report.json"
          : fs::path(report_path);
  WriteJson(ReportToJson(report), path);
  fmt::print("report       {}\n", path.string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path = FindConfigPath(argc, argv);
  try {
    if (!config_path.empty()) cfg.MergeJsonFile(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  CLI::App app{"Detects social group regions from person detections and "
               "depth maps."};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  auto* detect = app.add_subcommand("detect-groups",
                                    "Run the full pipeline over a manifest");
  AddRunFlags(detect, cfg, config_path);

  std::string export_out;
  auto* export_pairs = app.add_subcommand(
      "export-pairs", "Write pairwise judgments as annotation records");
  AddRunFlags(export_pairs, cfg, config_path);
  export_pairs->add_option("--out", export_out,
                           "Output file (default <out-dir>/pair_records.jsonl)");

  std::string sweep_out;
  auto* sweep = app.add_subcommand(
      "sweep", "Score the distance x depth threshold grid");
  AddRunFlags(sweep, cfg, config_path);
  sweep->add_option("--out", sweep_out,
                    "CSV file, '-' for stdout (default <out-dir>/sweep.csv)");

  std::string predictions, eval_manifest, report_path;
  double iou_threshold = kDefaultIouThreshold;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score predicted group boxes against ground truth");
  evaluate->add_option("--predictions", predictions, "Results file")
      ->required();
  evaluate->add_option("--manifest", eval_manifest,
                       "Manifest with gt_groups")
      ->required();
  evaluate->add_option("--iou-threshold", iou_threshold,
                       "IoU needed for a true positive")
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--report", report_path,
                       "JSON report (default next to predictions)");

  SynthConfig synth_cfg;
  std::string synth_out;
  std::string depth_format = "png";
  auto* synth = app.add_subcommand(
      "synth", "Generate synthetic scenes with planted groups");
  synth->add_option("--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--n-scenes", synth_cfg.n_scenes, "Number of scenes");
  synth->add_option("--width", synth_cfg.image.width, "Image width");
  synth->add_option("--height", synth_cfg.image.height, "Image height");
  synth->add_option("--min-persons", synth_cfg.min_persons,
                    "Minimum persons per scene");
  synth->add_option("--max-persons", synth_cfg.max_persons,
                    "Maximum persons per scene");
  synth->add_option("--singleton-prob", synth_cfg.singleton_probability,
                    "Probability that a person stands alone");
  synth->add_option("--max-group-spread", synth_cfg.max_group_spread,
                    "Max intra-group center distance / image diagonal");
  synth->add_option("--depth-format", depth_format, "png | pgm")
      ->check(CLI::IsMember({"png", "pgm"}));
  synth->add_option("--seed", synth_cfg.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("groupscope"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (detect->parsed()) return CmdDetectGroups(cfg);
    if (export_pairs->parsed()) return CmdExportPairs(cfg, export_out);
    if (sweep->parsed()) return CmdSweep(cfg, sweep_out);
    if (evaluate->parsed()) {
      return CmdEvaluate(predictions, eval_manifest, iou_threshold, report_path);
    }
    if (synth->parsed()) {
      const auto scenes = GenerateScenes(synth_cfg);
      const auto manifest = WriteSynthCorpus(
          scenes, synth_out,
          depth_format == "pgm" ? DepthFormat::kPgm : DepthFormat::kPng);
      fmt::print("scenes   {} -> {}\n", scenes.size(), manifest.string());
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kRemoteUnavailable ? kExitRemoteUnavailable
                                                     : kExitError;
  }
  return kExitError;
}
