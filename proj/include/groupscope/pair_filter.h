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


#ifndef GROUPSCOPE_PAIR_FILTER_H_
#define GROUPSCOPE_PAIR_FILTER_H_

#include <cstdint>

#include "groupscope/classifier.h"
#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"

namespace groupscope {

// A pair is excluded when its normalized center distance exceeds tau_d, or
// failing that, when its median-depth difference exceeds tau_z. Pairs
// exactly at a threshold are classified. (1.0, 255) disables filtering.
struct FilterParams {
  double tau_d = 0.4;  // [0, 1]
  int tau_z = 80;      // [0, 255]

  void Validate() const;
};

struct FilterStats {
  std::int64_t filtered_distance = 0;
  std::int64_t filtered_depth = 0;
  std::int64_t classified = 0;

  std::int64_t total() const {
    return filtered_distance + filtered_depth + classified;
  }
  FilterStats& operator+=(const FilterStats& o) {
    filtered_distance += o.filtered_distance;
    filtered_depth += o.filtered_depth;
    classified += o.classified;
    return *this;
  }
  bool operator==(const FilterStats&) const = default;
};

// kFilteredDistance, kFilteredDepth, or kClassified for the pair (i, j) of
// scene.persons. Requires median depths on both persons.
Provenance FilterPair(const Scene& scene, int i, int j,
                      const FilterParams& params);

// Builds the pairwise relation matrix: each unordered pair is either
// filtered to No or sent to `backend` once, with the judgment mirrored.
// `imagery` must be provided when backend.needs_imagery().
RelationMatrix BuildRelationMatrix(const Scene& scene,
                                   const FilterParams& params,
                                   ClassifierBackend& backend,
                                   const SceneImagery* imagery = nullptr);

// Classifies every unordered pair without consulting any threshold.
RelationMatrix BuildUnfilteredMatrix(const Scene& scene,
                                     ClassifierBackend& backend,
                                     const SceneImagery* imagery = nullptr);

// Overwrites the pairs `params` would exclude with filtered No entries.
// Equivalent to BuildRelationMatrix on the same judgments, since filtered
// pairs never reach the classifier.
RelationMatrix ApplyFilter(const RelationMatrix& unfiltered,
                           const Scene& scene, const FilterParams& params);

std::int64_t CountClassifierCalls(const RelationMatrix& matrix);
FilterStats CountByCause(const RelationMatrix& matrix);

}  // namespace groupscope

#endif  // GROUPSCOPE_PAIR_FILTER_H_
