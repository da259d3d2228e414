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


#ifndef GROUPSCOPE_EVALUATION_H_
#define GROUPSCOPE_EVALUATION_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "groupscope/classifier.h"
#include "groupscope/clustering.h"
#include "groupscope/geometry.h"
#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"
#include "json.hpp"

namespace groupscope {

inline constexpr double kDefaultIouThreshold = 0.5;

struct Match {
  int pred_idx = 0;
  int gt_idx = 0;
  double iou = 0.0;

  bool operator==(const Match&) const = default;
};

// One-to-one greedy matching: all (pred, gt) pairs with IoU > 0 sorted by
// IoU descending (ties: smaller gt_idx, then smaller pred_idx), each
// accepted when neither side is taken yet.
std::vector<Match> MatchGroups(std::span<const BBox> pred,
                               std::span<const BBox> gt);

// Additive per-scene tallies; corpus metrics are computed from their sum.
struct EvalCounts {
  std::int64_t n_pred = 0;
  std::int64_t n_gt = 0;
  std::int64_t n_matched = 0;
  std::int64_t true_positives = 0;  // matches with IoU >= threshold
  double matched_iou_sum = 0.0;

  EvalCounts& operator+=(const EvalCounts& o);
};

struct Metrics {
  double miou = 0.0;               // matched IoU summed over GT, / n_gt
  double miou_matched_only = 0.0;  // matched IoU / n_matched
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static Metrics From(const EvalCounts& c);
};

EvalCounts CountScene(std::span<const BBox> pred, std::span<const BBox> gt,
                      double iou_threshold = kDefaultIouThreshold);

struct SceneEval {
  std::string scene_id;
  EvalCounts counts;
  Metrics metrics;
};

struct EvalReport {
  double iou_threshold = kDefaultIouThreshold;
  EvalCounts totals;
  Metrics metrics;  // micro-averaged over scenes
  std::vector<SceneEval> per_scene;

  // Mean of per-scene F1 over scenes that have ground truth.
  double MeanSceneF1() const;
};

struct SceneBoxes {
  std::string scene_id;
  std::vector<BBox> pred;
  std::vector<BBox> gt;
};

EvalReport Score(std::span<const SceneBoxes> scenes,
                 double iou_threshold = kDefaultIouThreshold);

// Pairs predictions with scene ground truth by scene_id. Throws
// kValidationError listing offending ids when the two sets differ, unless
// `predictions` is empty, which scores every scene as having no predicted
// groups. Scenes without gt_groups count as having no ground truth.
EvalReport Evaluate(std::span<const Scene> scenes,
                    std::span<const SceneGroups> predictions,
                    double iou_threshold = kDefaultIouThreshold);

nlohmann::json ReportToJson(const EvalReport& report);
void PrintReport(const EvalReport& report, std::ostream& out);

struct SweepGrid {
  std::vector<double> distances;
  std::vector<int> depths;

  // Distances 0.0, 0.1, ..., 1.0; depths 0, 20, ..., 240, then 255.
  static SweepGrid Default();
  void Validate() const;
};

struct SweepRow {
  double tau_d = 0.0;
  int tau_z = 0;
  Metrics metrics;
  std::int64_t classified_pairs = 0;
};

// Re-filters cached unfiltered matrices at each grid point, re-clusters
// and re-scores. Rows iterate distance-major. `unfiltered[k]` belongs to
// `scenes[k]`, whose persons must carry median depths.
std::vector<SweepRow> Sweep(std::span<const Scene> scenes,
                            std::span<const RelationMatrix> unfiltered,
                            const SweepGrid& grid, const AgreementWeights& w,
                            double iou_threshold = kDefaultIouThreshold);

// Classifies every pair once with `backend`, then sweeps.
std::vector<SweepRow> Sweep(std::span<const Scene> scenes,
                            ClassifierBackend& backend, const SweepGrid& grid,
                            const AgreementWeights& w,
                            double iou_threshold = kDefaultIouThreshold);

// Header: tau_d,tau_z,miou,f1,precision,recall,classified_pairs
void WriteSweepCsv(std::span<const SweepRow> rows, std::ostream& out);

}  // namespace groupscope

#endif  // GROUPSCOPE_EVALUATION_H_
