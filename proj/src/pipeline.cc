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


#include "groupscope/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "groupscope/depth.h"
#include "groupscope/error.h"
#include "groupscope/scene_io.h"

namespace groupscope {

void PipelineConfig::Validate() const {
  if (!(tau_det >= 0.0 && tau_det <= 1.0)) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("tau_det {} outside [0, 1]", tau_det));
  }
  filter.Validate();
  weights.Validate();
  if (jobs < 1) throw Error(ErrorCode::kConfigError, "jobs must be >= 1");
}

nlohmann::json RunSummary::ToJson() const {
  return {{"scenes", scenes},
          {"failed_scenes", failed_scenes},
          {"persons_in", persons_in},
          {"persons_kept", persons_kept},
          {"pairs", pairs},
          {"filtered_distance", filter.filtered_distance},
          {"filtered_depth", filter.filtered_depth},
          {"classifier_calls", filter.classified},
          {"groups", groups},
          {"unparsed_answers", unparsed_answers}};
}

std::vector<SceneGroups> PipelineResult::Groups() const {
  std::vector<SceneGroups> out;
  for (const SceneOutcome& o : outcomes) {
    if (o.ok) out.push_back({o.scene_id, o.groups});
  }
  return out;
}

void AssignMedianDepths(Scene& scene, const DepthMap& depth) {
  for (PersonDetection& p : scene.persons) {
    p.median_depth = MedianDepth(depth, p.bbox);
  }
}

PreparedScene PrepareScene(const Scene& scene, double tau_det,
                           bool with_imagery) {
  PreparedScene out;
  out.scene = scene;
  out.scene.persons = FilterDetections(scene.persons, tau_det);
  if (with_imagery) {
    out.imagery = LoadSceneImagery(out.scene);
    AssignMedianDepths(out.scene, out.imagery->depth);
  } else {
    AssignMedianDepths(out.scene,
                       LoadDepthMap(out.scene.ResolveDepth(), out.scene.image));
  }
  return out;
}

SceneOutcome ProcessScene(const Scene& input, const PipelineConfig& config,
                          ClassifierBackend& backend) {
  PreparedScene prepared =
      PrepareScene(input, config.tau_det, backend.needs_imagery());
  SceneOutcome out;
  out.scene_id = input.scene_id;
  out.scene = std::move(prepared.scene);
  out.matrix = BuildRelationMatrix(
      out.scene, config.filter, backend,
      prepared.imagery ? &*prepared.imagery : nullptr);
  out.stats = CountByCause(out.matrix);
  out.groups = ExtractGroups(GreedyCluster(out.matrix, config.weights),
                             out.scene.persons);
  out.ok = true;
  return out;
}

PipelineResult RunPipeline(std::span<const Scene> scenes,
                           const PipelineConfig& config,
                           ClassifierBackend& backend) {
  config.Validate();
  PipelineResult result;
  result.outcomes.resize(scenes.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex fatal_mu;
  std::exception_ptr fatal;
  auto worker = [&] {
    for (std::size_t i = next++; i < scenes.size() && !abort; i = next++) {
      SceneOutcome& slot = result.outcomes[i];
      try {
        slot = ProcessScene(scenes[i], config, backend);
      } catch (const Error& e) {
        slot = SceneOutcome{};
        slot.scene_id = scenes[i].scene_id;
        slot.error = e.what();
        if (e.code() == ErrorCode::kRemoteUnavailable) {
          std::lock_guard<std::mutex> lock(fatal_mu);
          if (!fatal) fatal = std::current_exception();
          abort = true;
        } else {
          spdlog::error("scene '{}' failed: {}", slot.scene_id, e.what());
        }
      }
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.jobs), scenes.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  std::sort(result.outcomes.begin(), result.outcomes.end(),
            [](const SceneOutcome& a, const SceneOutcome& b) {
              return a.scene_id < b.scene_id;
            });
  RunSummary& s = result.summary;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    s.persons_in += static_cast<std::int64_t>(scenes[i].persons.size());
  }
  for (const SceneOutcome& o : result.outcomes) {
    ++s.scenes;
    if (!o.ok) {
      ++s.failed_scenes;
      continue;
    }
    const auto n = static_cast<std::int64_t>(o.scene.persons.size());
    s.persons_kept += n;
    s.pairs += n * (n - 1) / 2;
    s.filter += o.stats;
    s.groups += static_cast<std::int64_t>(o.groups.size());
  }
  if (const auto* remote = dynamic_cast<const RemoteBackend*>(&backend)) {
    s.unparsed_answers = remote->unparsed_answers();
  }
  return result;
}

}  // namespace groupscope
