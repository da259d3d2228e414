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


#ifndef GROUPSCOPE_SYNTH_H_
#define GROUPSCOPE_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "groupscope/geometry.h"
#include "groupscope/image.h"
#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"

namespace groupscope {

struct GroupSizeWeight {
  int size = 2;
  double probability = 1.0;
};

struct SynthConfig {
  int n_scenes = 20;
  ImageGeometry image{640, 480};
  int min_persons = 2;
  int max_persons = 8;
  // Sizes of planted groups (>= 2) and their probabilities; sums to 1.
  std::vector<GroupSizeWeight> group_sizes = {
      {2, 0.55}, {3, 0.25}, {4, 0.12}, {5, 0.08}};
  // Chance that the next person placed stands alone.
  double singleton_probability = 0.25;
  // Upper bound on center distance between members of one group, as a
  // fraction of the image diagonal.
  double max_group_spread = 0.2;
  // Used by CorruptJudgments when driven from this config.
  double flip_rate = 0.0;
  double notsure_rate = 0.0;
  std::uint64_t seed = 0;

  // Throws kConfigError.
  void Validate() const;
};

struct SynthScene {
  Scene scene;  // gt_groups carry member ids
  Image rgb;    // flat-color stand-in, 3 channels
  Image depth;  // 1 channel
};

// Deterministic for a given config. Members of a group stand side by side;
// groups (and singletons) occupy disjoint, margin-separated regions.
std::vector<SynthScene> GenerateScenes(const SynthConfig& config);

enum class DepthFormat { kPng, kPgm };

// Writes <dir>/manifest.jsonl, <dir>/rgb/<id>.png and <dir>/depth/<id>.png
// (or .pgm). Returns the manifest path.
std::filesystem::path WriteSynthCorpus(std::span<const SynthScene> scenes,
                                       const std::filesystem::path& dir,
                                       DepthFormat depth_format = DepthFormat::kPng);

// Each classified unordered pair draws one uniform u: u < flip_rate flips
// Yes <-> No, otherwise u < flip_rate + notsure_rate sets NotSure. Using one
// draw per pair keeps the affected set nested as the rates grow.
RelationMatrix CorruptJudgments(const RelationMatrix& m, double flip_rate,
                                double notsure_rate, std::uint64_t seed);

}  // namespace groupscope

#endif  // GROUPSCOPE_SYNTH_H_
