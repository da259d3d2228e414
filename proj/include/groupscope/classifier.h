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


#ifndef GROUPSCOPE_CLASSIFIER_H_
#define GROUPSCOPE_CLASSIFIER_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groupscope/depth.h"
#include "groupscope/image.h"
#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"

namespace groupscope {

// Everything sent to a model backend for one unordered person pair.
struct PairQuery {
  std::string scene_id;
  int person_a = 0;
  int person_b = 0;
  BBox union_box;       // padded union of the two person boxes
  PixelRect crop_rect;  // pixel region shared by both crops
  Image rgb_crop;       // 3 channels
  Image depth_crop;     // depth replicated to 3 channels so overlays keep color
  DepthCue cue;         // from the unpadded person boxes
  std::string prompt;

  std::string pair_id() const;
};

inline constexpr Rgb kFirstPersonColor{255, 0, 0};
inline constexpr Rgb kSecondPersonColor{0, 0, 255};

std::string_view DefaultPromptTemplate();
std::string LoadPromptTemplate(const std::filesystem::path& path);

// Substitutes {z_a}, {z_b} and {z_diff}. Every other `{identifier}` is a
// kTemplateError, as is a template missing any of the three.
std::string BuildPrompt(std::string_view prompt_template, const DepthCue& cue);

// RGB image and depth map of one scene, both sized like the scene.
struct SceneImagery {
  Image rgb;
  DepthMap depth;
};

// Throws kMissingAsset when either file cannot be read or decoded and
// kDimensionMismatch when a file disagrees with the scene geometry.
SceneImagery LoadSceneImagery(const Scene& scene);

PairQuery BuildPairQuery(const Scene& scene, const SceneImagery& imagery,
                         int person_a, int person_b, double pad_fraction,
                         std::string_view prompt_template);

// Total: "not sure" anywhere wins, otherwise the first standalone "yes" or
// "no" decides, otherwise NotSure (and `*recognized` is set to false).
Judgment ParseAnswer(std::string_view raw, bool* recognized = nullptr);

// One canonical pair (index_a < index_b into scene->persons).
struct PairTask {
  const Scene* scene = nullptr;
  int index_a = 0;
  int index_b = 0;
  const SceneImagery* imagery = nullptr;  // set when the backend needs it
};

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;

  virtual std::string_view name() const = 0;
  virtual bool needs_imagery() const { return false; }
  virtual Judgment Classify(const PairTask& task) = 0;

  // Results are in task order. The default runs tasks one by one.
  virtual std::vector<Judgment> ClassifyBatch(std::span<const PairTask> tasks);
};

// Answers from ground-truth membership: Yes exactly when both persons are
// members of the same annotated group. Requires member ids on every group.
class OracleBackend final : public ClassifierBackend {
 public:
  std::string_view name() const override { return "oracle"; }
  Judgment Classify(const PairTask& task) override;
};

struct HeuristicParams {
  double max_distance = 0.10;  // normalized center distance
  int max_depth_diff = 10;
};

// Yes when the pair is both close in the image and at similar median depth.
// Only meant to let the pipeline run without a model service.
class HeuristicBackend final : public ClassifierBackend {
 public:
  explicit HeuristicBackend(HeuristicParams params = {}) : params_(params) {}

  std::string_view name() const override { return "heuristic"; }
  Judgment Classify(const PairTask& task) override;

 private:
  HeuristicParams params_;
};

struct ClassifierEndpoint {
  std::string base_url;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  int max_inflight = 4;
  // Delay before retry k (k >= 1) is base * multiplier^(k-1), scaled by a
  // uniform jitter factor in [0.5, 1.5).
  std::chrono::milliseconds backoff_base{250};
  double backoff_multiplier = 2.0;

  void Validate() const;
};

// Reads MINGLE_CLASSIFIER_URL; empty when unset.
std::string ClassifierUrlFromEnv();

// Client for the remote classification service:
//   POST {base_url}/classify
//   {"rgb_b64": ..., "depth_b64": ..., "prompt": ..., "pair_id": ...}
//   -> 200 {"answer": "..."}
// Non-200 responses and transport failures are retried; after
// max_retries + 1 failed attempts the call throws kRemoteUnavailable.
// A 200 without a string "answer" throws kBackendError.
class RemoteBackend final : public ClassifierBackend {
 public:
  RemoteBackend(ClassifierEndpoint endpoint, std::string prompt_template,
                double pad_fraction, std::uint64_t seed);

  std::string_view name() const override { return "remote"; }
  bool needs_imagery() const override { return true; }
  Judgment Classify(const PairTask& task) override;
  std::vector<Judgment> ClassifyBatch(std::span<const PairTask> tasks) override;

  Judgment ClassifyQuery(const PairQuery& query);

  // Responses whose text matched no answer and degraded to NotSure.
  std::int64_t unparsed_answers() const { return unparsed_answers_.load(); }
  std::int64_t requests_sent() const { return requests_sent_.load(); }

 private:
  std::chrono::milliseconds BackoffDelay(int retry, std::uint64_t salt) const;

  ClassifierEndpoint endpoint_;
  std::string prompt_template_;
  double pad_fraction_;
  std::uint64_t seed_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::atomic<std::int64_t> unparsed_answers_{0};
  std::atomic<std::int64_t> requests_sent_{0};
};

}  // namespace groupscope

#endif  // GROUPSCOPE_CLASSIFIER_H_
