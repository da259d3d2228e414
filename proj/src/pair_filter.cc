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


#include "groupscope/pair_filter.h"

#include <cstdlib>
#include <vector>

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {
namespace {

void RequireDepths(const Scene& scene) {
  for (const PersonDetection& p : scene.persons) {
    if (!p.median_depth) {
      throw Error(ErrorCode::kValidationError,
                  fmt::format("scene '{}': person {} has no median depth",
                              scene.scene_id, p.person_id));
    }
  }
}

RelationMatrix Classify(const Scene& scene, const FilterParams* params,
                        ClassifierBackend& backend,
                        const SceneImagery* imagery) {
  const int n = static_cast<int>(scene.persons.size());
  RelationMatrix m(n);
  if (backend.needs_imagery() && imagery == nullptr && n > 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("backend '{}' needs scene imagery", backend.name()));
  }
  std::vector<PairTask> tasks;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Provenance p = params == nullptr ? Provenance::kClassified
                                             : FilterPair(scene, i, j, *params);
      if (p == Provenance::kClassified) {
        tasks.push_back({&scene, i, j, imagery});
      } else {
        m.Set(i, j, Judgment::kNo, p);
      }
    }
  }
  const std::vector<Judgment> judgments = backend.ClassifyBatch(tasks);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    m.Set(tasks[k].index_a, tasks[k].index_b, judgments[k],
          Provenance::kClassified);
  }
  return m;
}

}  // namespace

void FilterParams::Validate() const {
  if (!(tau_d >= 0.0 && tau_d <= 1.0)) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("tau_d {} outside [0, 1]", tau_d));
  }
  if (tau_z < 0 || tau_z > 255) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("tau_z {} outside [0, 255]", tau_z));
  }
}

Provenance FilterPair(const Scene& scene, int i, int j,
                      const FilterParams& params) {
  const PersonDetection& a = scene.persons[i];
  const PersonDetection& b = scene.persons[j];
  if (CenterDistance(a.bbox, b.bbox, scene.image) > params.tau_d) {
    return Provenance::kFilteredDistance;
  }
  if (!a.median_depth || !b.median_depth) {
    throw Error(ErrorCode::kValidationError,
                fmt::format("scene '{}': missing median depth", scene.scene_id));
  }
  if (std::abs(*a.median_depth - *b.median_depth) > params.tau_z) {
    return Provenance::kFilteredDepth;
  }
  return Provenance::kClassified;
}

RelationMatrix BuildRelationMatrix(const Scene& scene,
                                   const FilterParams& params,
                                   ClassifierBackend& backend,
                                   const SceneImagery* imagery) {
  params.Validate();
  RequireDepths(scene);
  return Classify(scene, &params, backend, imagery);
}

RelationMatrix BuildUnfilteredMatrix(const Scene& scene,
                                     ClassifierBackend& backend,
                                     const SceneImagery* imagery) {
  return Classify(scene, nullptr, backend, imagery);
}

RelationMatrix ApplyFilter(const RelationMatrix& unfiltered,
                           const Scene& scene, const FilterParams& params) {
  params.Validate();
  RequireDepths(scene);
  const int n = unfiltered.size();
  if (n != static_cast<int>(scene.persons.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "matrix size does not match the scene's person count");
  }
  RelationMatrix m = unfiltered;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Provenance p = FilterPair(scene, i, j, params);
      if (p != Provenance::kClassified) m.Set(i, j, Judgment::kNo, p);
    }
  }
  return m;
}

std::int64_t CountClassifierCalls(const RelationMatrix& matrix) {
  return CountByCause(matrix).classified;
}

FilterStats CountByCause(const RelationMatrix& matrix) {
  FilterStats s;
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = i + 1; j < matrix.size(); ++j) {
      switch (matrix.provenance(i, j)) {
        case Provenance::kFilteredDistance: ++s.filtered_distance; break;
        case Provenance::kFilteredDepth: ++s.filtered_depth; break;
        case Provenance::kClassified: ++s.classified; break;
        case Provenance::kDefault: break;
      }
    }
  }
  return s;
}

}  // namespace groupscope
