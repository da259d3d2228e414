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
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "groupscope/error.h"
#include "groupscope/pair_filter.h"
#include "groupscope/pipeline.h"
#include "groupscope/synth.h"
#include "test_util.h"

namespace groupscope {
namespace {

using testing::RandomBox;

// Greedy matching by repeated selection of the best remaining pair.
std::vector<Match> SelectionMatch(const std::vector<BBox>& pred,
                                  const std::vector<BBox>& gt) {
  std::vector<bool> pu(pred.size()), gu(gt.size());
  std::vector<Match> out;
  while (true) {
    Match best{-1, -1, 0.0};
    for (std::size_t g = 0; g < gt.size(); ++g) {
      for (std::size_t p = 0; p < pred.size(); ++p) {
        if (pu[p] || gu[g]) continue;
        const double v = Iou(pred[p], gt[g]);
        // Strictly greater keeps the first (smallest gt, then pred) on ties.
        if (v > best.iou) best = {static_cast<int>(p), static_cast<int>(g), v};
      }
    }
    if (best.pred_idx < 0) return out;
    pu[best.pred_idx] = gu[best.gt_idx] = true;
    out.push_back(best);
  }
}

std::vector<BBox> RandomBoxes(Rng& rng, int n) {
  std::vector<BBox> v;
  for (int k = 0; k < n; ++k) v.push_back(RandomBox(rng, 100, 100));
  return v;
}

template <typename T>
void Shuffle(Rng& rng, std::vector<T>& v) {
  for (int k = static_cast<int>(v.size()) - 1; k > 0; --k) {
    std::swap(v[k], v[rng.UniformInt(0, k)]);
  }
}

TEST_CASE("match_groups examples") {
  const BBox box = BBox::Create(0, 0, 10, 10);
  const std::vector<BBox> one = {box};
  const auto m = MatchGroups(one, one);
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Match{0, 0, 1.0});
  CHECK(MatchGroups({}, one).empty());
  CHECK(MatchGroups(one, {}).empty());

  // Disjoint boxes never match.
  const std::vector<BBox> far = {BBox::Create(50, 50, 60, 60)};
  CHECK(MatchGroups(far, one).empty());
}

TEST_CASE("two predictions compete for one ground-truth box") {
  const std::vector<BBox> gt = {BBox::Create(0, 0, 10, 10)};
  const std::vector<BBox> pred = {BBox::Create(0, 0, 5, 10),    // IoU 0.5
                                  BBox::Create(0, 0, 8, 10)};   // IoU 0.8
  // Both single-pair assignments, scored by IoU.
  const double iou0 = Iou(pred[0], gt[0]), iou1 = Iou(pred[1], gt[0]);
  CHECK(iou0 == doctest::Approx(0.5));
  CHECK(iou1 == doctest::Approx(0.8));
  const int better = iou1 > iou0 ? 1 : 0;
  const auto m = MatchGroups(pred, gt);
  REQUIRE(m.size() == 1);
  CHECK(m[0].pred_idx == better);
  CHECK(m[0].iou == iou1);
}

TEST_CASE("IoU ties resolve toward smaller indices") {
  const std::vector<BBox> gt = {BBox::Create(0, 0, 10, 10),
                                BBox::Create(0, 0, 10, 10)};
  const std::vector<BBox> pred = {BBox::Create(0, 0, 10, 10),
                                  BBox::Create(0, 0, 10, 10)};
  const auto m = MatchGroups(pred, gt);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == Match{0, 0, 1.0});
  CHECK(m[1] == Match{1, 1, 1.0});
}

TEST_CASE("score examples") {
  const BBox g1 = BBox::Create(0, 0, 10, 10), g2 = BBox::Create(20, 0, 40, 30);
  const std::vector<SceneBoxes> perfect = {{"a", {g1, g2}, {g1, g2}},
                                           {"b", {g2}, {g2}}};
  const Metrics p = Score(perfect).metrics;
  CHECK(p.miou == 1.0);
  CHECK(p.precision == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.f1 == 1.0);

  const std::vector<SceneBoxes> empty_pred = {{"a", {}, {g1, g2}}};
  const Metrics z = Score(empty_pred).metrics;
  CHECK(z.miou == 0.0);
  CHECK(z.precision == 0.0);
  CHECK(z.recall == 0.0);
  CHECK(z.f1 == 0.0);

  // Overlap 4 x 10 inside a 10 x 10 box: IoU 40 / 100.
  const std::vector<SceneBoxes> partial = {
      {"a", {BBox::Create(0, 0, 4, 10)}, {g1}}};
  const EvalReport r = Score(partial);
  CHECK(r.totals.n_matched == 1);
  CHECK(r.totals.true_positives == 0);
  CHECK(r.metrics.miou == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.metrics.miou_matched_only == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.metrics.f1 == 0.0);
  // A looser threshold turns it into a true positive.
  CHECK(Score(partial, 0.4).totals.true_positives == 1);
}

TEST_CASE("micro-averaging sums counts across scenes") {
  const BBox g = BBox::Create(0, 0, 10, 10);
  const BBox half = BBox::Create(0, 0, 5, 10);
  const std::vector<SceneBoxes> scenes = {
      {"a", {g}, {g}},
      {"b", {half, BBox::Create(50, 50, 60, 60)}, {g, BBox::Create(80, 80, 90, 90)}},
      {"c", {g}, {}},
  };
  const EvalReport r = Score(scenes);
  CHECK(r.totals.n_pred == 4);
  CHECK(r.totals.n_gt == 3);
  CHECK(r.totals.n_matched == 2);
  CHECK(r.totals.true_positives == 2);
  CHECK(r.metrics.precision == 0.5);
  CHECK(r.metrics.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.metrics.miou == doctest::Approx(1.5 / 3.0));
  CHECK(r.metrics.miou_matched_only == doctest::Approx(0.75));
  CHECK(r.metrics.f1 == doctest::Approx(2 * 0.5 * (2.0 / 3) / (0.5 + 2.0 / 3)));
  // Scene "c" has no ground truth and is left out of the per-scene mean.
  CHECK(r.MeanSceneF1() == doctest::Approx((1.0 + 0.5) / 2));
}

TEST_CASE("property: matching agrees with selection and is one-to-one") {
  Rng rng(13);
  for (int t = 0; t < 10000; ++t) {
    const auto pred = RandomBoxes(rng, rng.UniformInt(0, 6));
    const auto gt = RandomBoxes(rng, rng.UniformInt(0, 6));
    const auto m = MatchGroups(pred, gt);
    REQUIRE(m == SelectionMatch(pred, gt));
    std::vector<int> ps, gs;
    for (const Match& x : m) {
      REQUIRE(x.iou > 0.0);
      ps.push_back(x.pred_idx);
      gs.push_back(x.gt_idx);
    }
    std::sort(ps.begin(), ps.end());
    std::sort(gs.begin(), gs.end());
    REQUIRE(std::adjacent_find(ps.begin(), ps.end()) == ps.end());
    REQUIRE(std::adjacent_find(gs.begin(), gs.end()) == gs.end());
    REQUIRE(m.size() <= std::min(pred.size(), gt.size()));
  }
}

TEST_CASE("property: metric ranges, permutation and threshold monotonicity") {
  Rng rng(14);
  for (int t = 0; t < 10000; ++t) {
    std::vector<SceneBoxes> scenes(rng.UniformInt(1, 3));
    for (auto& s : scenes) {
      s.pred = RandomBoxes(rng, rng.UniformInt(0, 5));
      s.gt = RandomBoxes(rng, rng.UniformInt(0, 5));
    }
    const double thr = rng.Uniform(0.0, 1.0);
    const EvalReport r = Score(scenes, thr);
    const Metrics& m = r.metrics;
    for (double v : {m.miou, m.precision, m.recall, m.f1, m.miou_matched_only}) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0 + 1e-12);
    }
    REQUIRE(m.f1 <= std::max(m.precision, m.recall) + 1e-12);
    if (m.precision + m.recall > 0) {
      REQUIRE(m.f1 == doctest::Approx(2 * m.precision * m.recall /
                                      (m.precision + m.recall)));
    }
    REQUIRE(r.totals.n_matched <= std::min(r.totals.n_pred, r.totals.n_gt));

    auto shuffled = scenes;
    for (auto& s : shuffled) {
      Shuffle(rng, s.pred);
      Shuffle(rng, s.gt);
    }
    const EvalReport rs = Score(shuffled, thr);
    REQUIRE(rs.totals.true_positives == r.totals.true_positives);
    REQUIRE(rs.totals.n_matched == r.totals.n_matched);
    REQUIRE(rs.metrics.miou == doctest::Approx(m.miou));

    const double higher = rng.Uniform(thr, 1.0);
    REQUIRE(Score(scenes, higher).totals.true_positives <= r.totals.true_positives);
  }
}

struct SweepFixture {
  std::vector<Scene> scenes;
  std::vector<RelationMatrix> unfiltered;

  explicit SweepFixture(int n) {
    SynthConfig cfg;
    cfg.n_scenes = n;
    cfg.seed = 21;
    OracleBackend oracle;
    for (SynthScene& s : GenerateScenes(cfg)) {
      AssignMedianDepths(s.scene, DepthMap(s.depth));
      unfiltered.push_back(BuildUnfilteredMatrix(s.scene, oracle));
      scenes.push_back(std::move(s.scene));
    }
  }
};

TEST_CASE("sweep grid") {
  const SweepGrid g = SweepGrid::Default();
  CHECK(g.distances.size() == 11);
  CHECK(g.depths.size() == 14);
  CHECK(g.distances.front() == 0.0);
  CHECK(g.distances.back() == 1.0);
  CHECK(g.depths.back() == 255);
  CHECK(g.depths[12] == 240);
  CHECK_NOTHROW(g.Validate());
  CHECK_THROWS_AS((SweepGrid{{0.5, 0.1}, {0}}.Validate()), Error);
  CHECK_THROWS_AS((SweepGrid{{0.1}, {300}}.Validate()), Error);
  CHECK_THROWS_AS((SweepGrid{{}, {10}}.Validate()), Error);
}

TEST_CASE("sweep: size, identity and monotone call counts") {
  const SweepFixture f(30);
  const AgreementWeights w;
  const auto rows = Sweep(f.scenes, f.unfiltered, SweepGrid::Default(), w);
  REQUIRE(rows.size() == 154);
  CHECK(rows.front().tau_d == 0.0);
  CHECK(rows[1].tau_z == 20);

  // Last row is the unfiltered pipeline.
  std::vector<SceneBoxes> boxes;
  std::int64_t pairs = 0;
  for (std::size_t k = 0; k < f.scenes.size(); ++k) {
    SceneBoxes b{f.scenes[k].scene_id, {}, {}};
    for (const auto& g : ExtractGroups(GreedyCluster(f.unfiltered[k], w),
                                       f.scenes[k].persons)) {
      b.pred.push_back(g.bbox);
    }
    for (const auto& g : *f.scenes[k].gt_groups) b.gt.push_back(g.bbox);
    boxes.push_back(std::move(b));
    pairs += CountClassifierCalls(f.unfiltered[k]);
  }
  const Metrics expected = Score(boxes).metrics;
  const SweepRow& last = rows.back();
  CHECK(last.tau_d == 1.0);
  CHECK(last.tau_z == 255);
  CHECK(last.metrics.miou == expected.miou);
  CHECK(last.metrics.f1 == expected.f1);
  CHECK(last.classified_pairs == pairs);
  CHECK(expected.f1 == 1.0);

  std::map<std::pair<double, int>, std::int64_t> calls;
  for (const SweepRow& r : rows) calls[{r.tau_d, r.tau_z}] = r.classified_pairs;
  for (const SweepRow& r : rows) {
    for (const auto& [key, c] : calls) {
      if (key.first <= r.tau_d && key.second <= r.tau_z) {
        CHECK(c <= r.classified_pairs);
      }
    }
  }

  OracleBackend oracle;
  const auto via_backend = Sweep(f.scenes, oracle, SweepGrid::Default(), w);
  REQUIRE(via_backend.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(via_backend[k].metrics.f1 == rows[k].metrics.f1);
    CHECK(via_backend[k].classified_pairs == rows[k].classified_pairs);
  }
}

TEST_CASE("sweep CSV") {
  const SweepFixture f(3);
  const auto rows =
      Sweep(f.scenes, f.unfiltered, SweepGrid::Default(), AgreementWeights{});
  std::ostringstream out;
  WriteSweepCsv(rows, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau_d,tau_z,miou,f1,precision,recall,classified_pairs");
  int n = 0;
  std::string first;
  while (std::getline(in, line)) {
    if (n++ == 0) first = line;
  }
  CHECK(n == 154);
  CHECK(first.rfind("0.0,0,", 0) == 0);
}

TEST_CASE("evaluate pairs predictions with scenes by id") {
  const SweepFixture f(4);
  std::vector<SceneGroups> preds;
  for (const Scene& s : f.scenes) {
    SceneGroups sg{s.scene_id, {}};
    for (const auto& g : *s.gt_groups) sg.groups.push_back({*g.member_ids, g.bbox});
    preds.push_back(sg);
  }
  CHECK(Evaluate(f.scenes, preds).metrics.f1 == 1.0);

  auto missing = preds;
  missing.pop_back();
  try {
    Evaluate(f.scenes, missing);
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidationError);
    CHECK(std::string(e.what()).find(f.scenes.back().scene_id) != std::string::npos);
  }
  const EvalReport none = Evaluate(f.scenes, std::vector<SceneGroups>{});
  CHECK(none.metrics.f1 == 0.0);
  CHECK(none.totals.n_gt > 0);

  auto extra = preds;
  extra.push_back({"nope", {}});
  CHECK_THROWS_AS(Evaluate(f.scenes, extra), Error);

  const nlohmann::json j = ReportToJson(Evaluate(f.scenes, preds));
  CHECK(j.contains("miou"));
  CHECK(j["per_scene"].size() == 4);
  std::ostringstream table;
  PrintReport(Evaluate(f.scenes, preds), table);
  CHECK(table.str().find("1.000") != std::string::npos);
}

}  // namespace
}  // namespace groupscope
