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


#include "groupscope/evaluation.h"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

#include "groupscope/error.h"
#include "groupscope/pair_filter.h"

namespace groupscope {

std::vector<Match> MatchGroups(std::span<const BBox> pred,
                               std::span<const BBox> gt) {
  std::vector<Match> candidates;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const double iou = Iou(pred[p], gt[g]);
      if (iou > 0.0) {
        candidates.push_back(
            {static_cast<int>(p), static_cast<int>(g), iou});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Match& a, const Match& b) {
              if (a.iou != b.iou) return a.iou > b.iou;
              if (a.gt_idx != b.gt_idx) return a.gt_idx < b.gt_idx;
              return a.pred_idx < b.pred_idx;
            });
  std::vector<bool> pred_used(pred.size()), gt_used(gt.size());
  std::vector<Match> matches;
  for (const Match& m : candidates) {
    if (pred_used[m.pred_idx] || gt_used[m.gt_idx]) continue;
    pred_used[m.pred_idx] = gt_used[m.gt_idx] = true;
    matches.push_back(m);
  }
  return matches;
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& o) {
  n_pred += o.n_pred;
  n_gt += o.n_gt;
  n_matched += o.n_matched;
  true_positives += o.true_positives;
  matched_iou_sum += o.matched_iou_sum;
  return *this;
}

Metrics Metrics::From(const EvalCounts& c) {
  Metrics m;
  const auto tp = static_cast<double>(c.true_positives);
  if (c.n_pred > 0) m.precision = tp / static_cast<double>(c.n_pred);
  if (c.n_gt > 0) {
    m.recall = tp / static_cast<double>(c.n_gt);
    m.miou = c.matched_iou_sum / static_cast<double>(c.n_gt);
  }
  if (c.n_matched > 0) {
    m.miou_matched_only = c.matched_iou_sum / static_cast<double>(c.n_matched);
  }
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

EvalCounts CountScene(std::span<const BBox> pred, std::span<const BBox> gt,
                      double iou_threshold) {
  EvalCounts c;
  c.n_pred = static_cast<std::int64_t>(pred.size());
  c.n_gt = static_cast<std::int64_t>(gt.size());
  for (const Match& m : MatchGroups(pred, gt)) {
    ++c.n_matched;
    c.matched_iou_sum += m.iou;
    if (m.iou >= iou_threshold) ++c.true_positives;
  }
  return c;
}

double EvalReport::MeanSceneF1() const {
  double sum = 0.0;
  int count = 0;
  for (const SceneEval& s : per_scene) {
    if (s.counts.n_gt == 0) continue;
    sum += s.metrics.f1;
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

EvalReport Score(std::span<const SceneBoxes> scenes, double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("IoU threshold {} outside [0, 1]", iou_threshold));
  }
  EvalReport report;
  report.iou_threshold = iou_threshold;
  for (const SceneBoxes& s : scenes) {
    SceneEval e;
    e.scene_id = s.scene_id;
    e.counts = CountScene(s.pred, s.gt, iou_threshold);
    e.metrics = Metrics::From(e.counts);
    report.totals += e.counts;
    report.per_scene.push_back(std::move(e));
  }
  report.metrics = Metrics::From(report.totals);
  return report;
}

EvalReport Evaluate(std::span<const Scene> scenes,
                    std::span<const SceneGroups> predictions,
                    double iou_threshold) {
  std::map<std::string, const SceneGroups*> by_id;
  for (const SceneGroups& p : predictions) {
    if (!by_id.emplace(p.scene_id, &p).second) {
      throw Error(ErrorCode::kValidationError,
                  fmt::format("duplicate prediction for scene '{}'", p.scene_id));
    }
  }
  std::set<std::string> scene_ids;
  std::vector<std::string> missing;
  for (const Scene& s : scenes) {
    scene_ids.insert(s.scene_id);
    if (!by_id.contains(s.scene_id)) missing.push_back(s.scene_id);
  }
  std::vector<std::string> extra;
  for (const auto& [id, _] : by_id) {
    if (!scene_ids.contains(id)) extra.push_back(id);
  }
  // A prediction set with no records at all means nothing was predicted.
  const bool nothing_predicted = predictions.empty();
  if (!nothing_predicted && (!missing.empty() || !extra.empty())) {
    throw Error(ErrorCode::kValidationError,
                fmt::format("scene ids differ: missing predictions for [{}]; "
                            "unknown prediction scenes [{}]",
                            fmt::join(missing, ", "), fmt::join(extra, ", ")));
  }
  std::vector<SceneBoxes> boxes;
  for (const Scene& s : scenes) {
    SceneBoxes b;
    b.scene_id = s.scene_id;
    if (!nothing_predicted) {
      for (const GroupRegion& g : by_id.at(s.scene_id)->groups) {
        b.pred.push_back(g.bbox);
      }
    }
    if (s.gt_groups) {
      for (const GroupAnnotation& g : *s.gt_groups) b.gt.push_back(g.bbox);
    }
    boxes.push_back(std::move(b));
  }
  EvalReport report = Score(boxes, iou_threshold);
  spdlog::info("matched-only mIoU (alternative convention): {:.6f}",
               report.metrics.miou_matched_only);
  return report;
}

nlohmann::json ReportToJson(const EvalReport& report) {
  auto metrics_json = [](const Metrics& m) {
    return nlohmann::json{{"miou", m.miou},
                          {"miou_matched_only", m.miou_matched_only},
                          {"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1}};
  };
  auto counts_json = [](const EvalCounts& c) {
    return nlohmann::json{{"n_pred", c.n_pred},
                          {"n_gt", c.n_gt},
                          {"n_matched", c.n_matched},
                          {"true_positives", c.true_positives}};
  };
  nlohmann::json per_scene = nlohmann::json::array();
  for (const SceneEval& s : report.per_scene) {
    nlohmann::json j = metrics_json(s.metrics);
    j.update(counts_json(s.counts));
    j["scene_id"] = s.scene_id;
    per_scene.push_back(std::move(j));
  }
  nlohmann::json out = metrics_json(report.metrics);
  out.update(counts_json(report.totals));
  out["iou_threshold"] = report.iou_threshold;
  out["per_scene"] = std::move(per_scene);
  return out;
}

void PrintReport(const EvalReport& report, std::ostream& out) {
  const Metrics& m = report.metrics;
  const EvalCounts& c = report.totals;
  const std::string tp_label = fmt::format("TP@{:.2f}", report.iou_threshold);
  fmt::print(out, "{:<14}{}\n", "scenes", report.per_scene.size());
  fmt::print(out, "{:<14}{}\n", "predicted", c.n_pred);
  fmt::print(out, "{:<14}{}\n", "ground truth", c.n_gt);
  fmt::print(out, "{:<14}{}\n", "matched", c.n_matched);
  fmt::print(out, "{:<14}{}\n", tp_label, c.true_positives);
  fmt::print(out, "{:<14}{:.3f}\n", "mIoU", m.miou);
  fmt::print(out, "{:<14}{:.3f}\n", "precision", m.precision);
  fmt::print(out, "{:<14}{:.3f}\n", "recall", m.recall);
  fmt::print(out, "{:<14}{:.3f}\n", "F1", m.f1);
}

SweepGrid SweepGrid::Default() {
  SweepGrid g;
  for (int k = 0; k <= 10; ++k) g.distances.push_back(k / 10.0);
  for (int z = 0; z <= 255; z += 20) g.depths.push_back(z);
  if (g.depths.back() != 255) g.depths.push_back(255);
  return g;
}

void SweepGrid::Validate() const {
  if (distances.empty() || depths.empty()) {
    throw Error(ErrorCode::kConfigError, "sweep grid axes must be non-empty");
  }
  if (!std::is_sorted(distances.begin(), distances.end()) ||
      !std::is_sorted(depths.begin(), depths.end())) {
    throw Error(ErrorCode::kConfigError, "sweep grid axes must be ascending");
  }
  for (double d : distances) FilterParams{d, 0}.Validate();
  for (int z : depths) FilterParams{0.0, z}.Validate();
}

std::vector<SweepRow> Sweep(std::span<const Scene> scenes,
                            std::span<const RelationMatrix> unfiltered,
                            const SweepGrid& grid, const AgreementWeights& w,
                            double iou_threshold) {
  grid.Validate();
  w.Validate();
  if (scenes.size() != unfiltered.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sweep needs one unfiltered matrix per scene");
  }
  std::vector<SweepRow> rows;
  for (double tau_d : grid.distances) {
    for (int tau_z : grid.depths) {
      const FilterParams params{tau_d, tau_z};
      SweepRow row;
      row.tau_d = tau_d;
      row.tau_z = tau_z;
      std::vector<SceneBoxes> boxes;
      for (std::size_t k = 0; k < scenes.size(); ++k) {
        const Scene& scene = scenes[k];
        const RelationMatrix m = ApplyFilter(unfiltered[k], scene, params);
        row.classified_pairs += CountClassifierCalls(m);
        SceneBoxes b;
        b.scene_id = scene.scene_id;
        for (const GroupRegion& g :
             ExtractGroups(GreedyCluster(m, w), scene.persons)) {
          b.pred.push_back(g.bbox);
        }
        if (scene.gt_groups) {
          for (const GroupAnnotation& g : *scene.gt_groups) b.gt.push_back(g.bbox);
        }
        boxes.push_back(std::move(b));
      }
      row.metrics = Score(boxes, iou_threshold).metrics;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<SweepRow> Sweep(std::span<const Scene> scenes,
                            ClassifierBackend& backend, const SweepGrid& grid,
                            const AgreementWeights& w, double iou_threshold) {
  std::vector<RelationMatrix> unfiltered;
  unfiltered.reserve(scenes.size());
  for (const Scene& scene : scenes) {
    std::optional<SceneImagery> imagery;
    if (backend.needs_imagery()) imagery = LoadSceneImagery(scene);
    unfiltered.push_back(BuildUnfilteredMatrix(
        scene, backend, imagery ? &*imagery : nullptr));
  }
  return Sweep(scenes, unfiltered, grid, w, iou_threshold);
}

void WriteSweepCsv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "tau_d,tau_z,miou,f1,precision,recall,classified_pairs\n";
  for (const SweepRow& r : rows) {
    fmt::print(out, "{:.1f},{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", r.tau_d,
               r.tau_z, r.metrics.miou, r.metrics.f1, r.metrics.precision,
               r.metrics.recall, r.classified_pairs);
  }
}

}  // namespace groupscope
