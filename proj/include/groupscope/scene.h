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


#ifndef GROUPSCOPE_SCENE_H_
#define GROUPSCOPE_SCENE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "groupscope/geometry.h"
#include "groupscope/relation_matrix.h"

namespace groupscope {

struct PersonDetection {
  int person_id = 0;
  BBox bbox;
  double confidence = 0.0;
  std::optional<int> median_depth;  // filled by the depth stage

  bool operator==(const PersonDetection&) const = default;
};

struct GroupAnnotation {
  int group_id = 0;
  // Sorted. Absent for box-only ground truth.
  std::optional<std::vector<int>> member_ids;
  BBox bbox;

  bool operator==(const GroupAnnotation&) const = default;
};

struct Scene {
  std::string scene_id;
  ImageGeometry image;
  std::string rgb_path;    // as written in the manifest
  std::string depth_path;  // as written in the manifest
  std::vector<PersonDetection> persons;
  std::optional<std::vector<GroupAnnotation>> gt_groups;
  // Directory that relative asset paths resolve against. Not serialized.
  std::filesystem::path asset_root;

  std::filesystem::path ResolveRgb() const { return asset_root / rgb_path; }
  std::filesystem::path ResolveDepth() const { return asset_root / depth_path; }

  // Position of `person_id` in `persons`, or -1.
  int IndexOf(int person_id) const;

  bool operator==(const Scene& other) const;
};

// A predicted group: at least two members (sorted person ids) and the box
// enclosing their person boxes.
struct GroupRegion {
  std::vector<int> member_ids;
  BBox bbox;

  bool operator==(const GroupRegion&) const = default;
};

struct SceneGroups {
  std::string scene_id;
  std::vector<GroupRegion> groups;

  bool operator==(const SceneGroups&) const = default;
};

enum class AnnotatorSource { kHuman, kPipeline };

// Canonical unordered pair label: person_a < person_b.
struct PairAnnotationRecord {
  std::string scene_id;
  int person_a = 0;
  int person_b = 0;
  Judgment label = Judgment::kNotSure;
  AnnotatorSource annotator_source = AnnotatorSource::kPipeline;

  bool operator==(const PairAnnotationRecord&) const = default;
};

}  // namespace groupscope

#endif  // GROUPSCOPE_SCENE_H_
