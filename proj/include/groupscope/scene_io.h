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


#ifndef GROUPSCOPE_SCENE_IO_H_
#define GROUPSCOPE_SCENE_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"

namespace groupscope {

// One rejected manifest line.
struct ManifestIssue {
  int line = 0;
  std::string scene_id;  // empty when the line did not parse
  std::string message;
};

// Parses and validates one manifest line. Throws kParseError for malformed
// JSON or schema violations and kValidationError for invariant breaches.
Scene ParseSceneLine(std::string_view line);
void ValidateScene(const Scene& scene);

nlohmann::json SceneToJson(const Scene& scene);

// Reads a JSON-lines manifest; blank lines are skipped. Asset paths resolve
// relative to the manifest's directory. With `issues == nullptr` the first
// bad line throws (message prefixed "path:line:"); otherwise bad lines are
// recorded there and skipped. Duplicate scene ids are a validation error.
std::vector<Scene> LoadScenes(const std::filesystem::path& manifest,
                              std::vector<ManifestIssue>* issues = nullptr);

void WriteManifest(std::span<const Scene> scenes,
                   const std::filesystem::path& path);

// Detections with confidence >= tau_det, order preserved.
std::vector<PersonDetection> FilterDetections(
    std::span<const PersonDetection> persons, double tau_det);

// One line per scene, sorted by scene_id. Output bytes depend only on the
// input values.
void WriteResults(std::span<const SceneGroups> results,
                  const std::filesystem::path& path);
std::vector<SceneGroups> LoadResults(const std::filesystem::path& path);

// Records for every classified (non-filtered) unordered pair of each scene,
// labelled as pipeline output. `matrices[k]` is indexed by the positions of
// `scenes[k].persons`.
std::vector<PairAnnotationRecord> CollectPairRecords(
    std::span<const Scene> scenes, std::span<const RelationMatrix> matrices);
void ExportPairRecords(std::span<const Scene> scenes,
                       std::span<const RelationMatrix> matrices,
                       const std::filesystem::path& path);
std::vector<PairAnnotationRecord> LoadPairRecords(
    const std::filesystem::path& path);

}  // namespace groupscope

#endif  // GROUPSCOPE_SCENE_IO_H_
