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


#ifndef GROUPSCOPE_PIPELINE_H_
#define GROUPSCOPE_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "groupscope/classifier.h"
#include "groupscope/clustering.h"
#include "groupscope/pair_filter.h"
#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"
#include "json.hpp"

namespace groupscope {

struct PipelineConfig {
  double tau_det = 0.5;
  FilterParams filter;
  AgreementWeights weights;
  int jobs = 1;  // scenes processed concurrently

  void Validate() const;
};

// Result of running one scene end to end.
struct SceneOutcome {
  std::string scene_id;
  bool ok = false;
  std::string error;
  Scene scene;  // confidence-filtered persons with median depths filled
  RelationMatrix matrix;
  FilterStats stats;
  std::vector<GroupRegion> groups;
};

struct RunSummary {
  std::int64_t scenes = 0;
  std::int64_t failed_scenes = 0;
  std::int64_t persons_in = 0;
  std::int64_t persons_kept = 0;
  std::int64_t pairs = 0;
  FilterStats filter;  // filter.classified == classifier calls
  std::int64_t groups = 0;
  std::int64_t unparsed_answers = 0;

  nlohmann::json ToJson() const;
};

struct PipelineResult {
  std::vector<SceneOutcome> outcomes;  // sorted by scene_id
  RunSummary summary;

  std::vector<SceneGroups> Groups() const;  // successful scenes only
};

// Fills median_depth for every person from `depth`.
void AssignMedianDepths(Scene& scene, const DepthMap& depth);

struct PreparedScene {
  Scene scene;  // confidence-filtered, median depths filled
  std::optional<SceneImagery> imagery;
};

// Confidence filter plus depth cues. Loads the RGB image as well when
// `with_imagery` is set.
PreparedScene PrepareScene(const Scene& scene, double tau_det,
                           bool with_imagery);

// Confidence filter, depth cues, pair filtering and classification,
// greedy clustering, group boxes. Throws on any failure.
SceneOutcome ProcessScene(const Scene& scene, const PipelineConfig& config,
                          ClassifierBackend& backend);

// Runs every scene. A failing scene is logged and recorded in its outcome
// while the run continues, except kRemoteUnavailable, which stops the run
// and is rethrown.
PipelineResult RunPipeline(std::span<const Scene> scenes,
                           const PipelineConfig& config,
                           ClassifierBackend& backend);

}  // namespace groupscope

#endif  // GROUPSCOPE_PIPELINE_H_
