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


#include "groupscope/classifier.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>
#include <utility>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "groupscope/error.h"
#include "groupscope/random.h"
#include "httplib.h"
#include "json.hpp"

namespace groupscope {
namespace {

constexpr std::string_view kDefaultPrompt =
    "Two people are outlined in these images: the first in red, the second in "
    "blue. The first image is an RGB crop and the second is the matching "
    "depth crop.\n"
    "Median depth (0-255 scale) of the first person: {z_a}. Median depth of "
    "the second person: {z_b}. Absolute depth difference: {z_diff}.\n"
    "Using visual cues such as conversation, gaze, body orientation and "
    "shared movement, decide whether these two people are socially "
    "interacting with each other, or whether they are only standing or "
    "walking close to each other without interacting.\n"
    "Answer with exactly one of: Yes, No, Not sure.\n";

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const PersonDetection& PersonById(const Scene& scene, int person_id) {
  const int idx = scene.IndexOf(person_id);
  if (idx < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("scene '{}' has no person {}", scene.scene_id,
                            person_id));
  }
  return scene.persons[idx];
}

}  // namespace

std::string PairQuery::pair_id() const {
  return fmt::format("{}:{}-{}", scene_id, person_a, person_b);
}

std::string_view DefaultPromptTemplate() { return kDefaultPrompt; }

std::string LoadPromptTemplate(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open prompt template {}", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string BuildPrompt(std::string_view prompt_template, const DepthCue& cue) {
  const std::map<std::string, int, std::less<>> values = {
      {"z_a", cue.z_a}, {"z_b", cue.z_b}, {"z_diff", cue.abs_diff}};
  std::map<std::string, int, std::less<>> uses;
  std::string out;
  out.reserve(prompt_template.size() + 16);
  std::size_t i = 0;
  while (i < prompt_template.size()) {
    const char c = prompt_template[i];
    if (c == '{') {
      std::size_t end = i + 1;
      while (end < prompt_template.size() && IsIdentChar(prompt_template[end])) {
        ++end;
      }
      if (end > i + 1 && end < prompt_template.size() &&
          prompt_template[end] == '}') {
        const std::string_view key = prompt_template.substr(i + 1, end - i - 1);
        const auto it = values.find(key);
        if (it == values.end()) {
          throw Error(ErrorCode::kTemplateError,
                      fmt::format("unknown placeholder {{{}}}", key));
        }
        out += std::to_string(it->second);
        ++uses[it->first];
        i = end + 1;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  for (const auto& [key, value] : values) {
    if (!uses.contains(key)) {
      throw Error(ErrorCode::kTemplateError,
                  fmt::format("template is missing placeholder {{{}}}", key));
    }
  }
  return out;
}

SceneImagery LoadSceneImagery(const Scene& scene) {
  auto load = [&](const std::filesystem::path& path) {
    try {
      return ReadImage(path);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMissingFile ||
          e.code() == ErrorCode::kUnsupportedFormat) {
        throw Error(ErrorCode::kMissingAsset,
                    fmt::format("scene '{}': {}", scene.scene_id, e.what()));
      }
      throw;
    }
  };
  Image rgb = load(scene.ResolveRgb());
  if (rgb.width != scene.image.width || rgb.height != scene.image.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("scene '{}': RGB image is {}x{}, expected {}x{}",
                            scene.scene_id, rgb.width, rgb.height,
                            scene.image.width, scene.image.height));
  }
  rgb = GrayToRgb(rgb);
  Image depth = load(scene.ResolveDepth());
  if (depth.channels != 1) {
    throw Error(ErrorCode::kMissingAsset,
                fmt::format("scene '{}': depth map {} is not single-channel",
                            scene.scene_id, scene.ResolveDepth().string()));
  }
  if (depth.width != scene.image.width || depth.height != scene.image.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("scene '{}': depth map is {}x{}, expected {}x{}",
                            scene.scene_id, depth.width, depth.height,
                            scene.image.width, scene.image.height));
  }
  return SceneImagery{std::move(rgb), DepthMap(std::move(depth))};
}

PairQuery BuildPairQuery(const Scene& scene, const SceneImagery& imagery,
                         int person_a, int person_b, double pad_fraction,
                         std::string_view prompt_template) {
  const PersonDetection& a = PersonById(scene, person_a);
  const PersonDetection& b = PersonById(scene, person_b);
  const ImageGeometry geom = imagery.depth.geometry();

  PairQuery q;
  q.scene_id = scene.scene_id;
  q.person_a = person_a;
  q.person_b = person_b;
  q.union_box = PadBBox(BBoxUnion(a.bbox, b.bbox), pad_fraction, geom);
  q.crop_rect = ToPixelRect(q.union_box, geom);
  q.rgb_crop = Crop(GrayToRgb(imagery.rgb), q.crop_rect);
  q.depth_crop = GrayToRgb(Crop(imagery.depth.image(), q.crop_rect));

  auto to_crop = [&](const BBox& box) {
    PixelRect r = ToPixelRect(box, geom);
    r.x0 -= q.crop_rect.x0;
    r.x1 -= q.crop_rect.x0;
    r.y0 -= q.crop_rect.y0;
    r.y1 -= q.crop_rect.y0;
    return r;
  };
  for (Image* crop : {&q.rgb_crop, &q.depth_crop}) {
    DrawRectangle(*crop, to_crop(a.bbox), kFirstPersonColor);
    DrawRectangle(*crop, to_crop(b.bbox), kSecondPersonColor);
  }
  q.cue = ComputeDepthCue(imagery.depth, a.bbox, b.bbox);
  q.prompt = BuildPrompt(prompt_template, q.cue);
  return q;
}

Judgment ParseAnswer(std::string_view raw, bool* recognized) {
  std::string text(raw);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (recognized != nullptr) *recognized = true;
  static const std::regex kNotSure(R"(not[\s_-]*sure)");
  if (std::regex_search(text, kNotSure)) return Judgment::kNotSure;

  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0 && IsIdentChar(text[i - 1])) continue;
    for (const auto& [word, judgment] :
         {std::pair<std::string_view, Judgment>{"yes", Judgment::kYes},
          {"no", Judgment::kNo}}) {
      if (text.compare(i, word.size(), word) != 0) continue;
      const std::size_t after = i + word.size();
      if (after < text.size() && IsIdentChar(text[after])) continue;
      return judgment;
    }
  }
  if (recognized != nullptr) *recognized = false;
  spdlog::warn("unrecognized classifier answer, treating as not sure: '{}'",
               raw.substr(0, 200));
  return Judgment::kNotSure;
}

std::vector<Judgment> ClassifierBackend::ClassifyBatch(
    std::span<const PairTask> tasks) {
  std::vector<Judgment> out;
  out.reserve(tasks.size());
  for (const PairTask& t : tasks) {
    try {
      out.push_back(Classify(t));
    } catch (const Error& e) {
      throw Error(e.code(),
                  fmt::format("{}:{}-{}: {}", t.scene->scene_id,
                              t.scene->persons[t.index_a].person_id,
                              t.scene->persons[t.index_b].person_id, e.what()));
    }
  }
  return out;
}

Judgment OracleBackend::Classify(const PairTask& task) {
  const Scene& scene = *task.scene;
  if (!scene.gt_groups) {
    throw Error(ErrorCode::kBackendError,
                fmt::format("scene '{}': oracle backend needs gt_groups",
                            scene.scene_id));
  }
  const int a = scene.persons[task.index_a].person_id;
  const int b = scene.persons[task.index_b].person_id;
  for (const GroupAnnotation& g : *scene.gt_groups) {
    if (!g.member_ids) {
      throw Error(ErrorCode::kBackendError,
                  fmt::format("scene '{}': oracle backend needs member_ids on "
                              "group {}",
                              scene.scene_id, g.group_id));
    }
  }
  for (const GroupAnnotation& g : *scene.gt_groups) {
    const auto& m = *g.member_ids;
    if (std::binary_search(m.begin(), m.end(), a) &&
        std::binary_search(m.begin(), m.end(), b)) {
      return Judgment::kYes;
    }
  }
  return Judgment::kNo;
}

Judgment HeuristicBackend::Classify(const PairTask& task) {
  const Scene& scene = *task.scene;
  const PersonDetection& a = scene.persons[task.index_a];
  const PersonDetection& b = scene.persons[task.index_b];
  if (!a.median_depth || !b.median_depth) {
    throw Error(ErrorCode::kBackendError,
                fmt::format("scene '{}': heuristic backend needs median depths",
                            scene.scene_id));
  }
  const double dist = CenterDistance(a.bbox, b.bbox, scene.image);
  const int diff = std::abs(*a.median_depth - *b.median_depth);
  return dist <= params_.max_distance && diff <= params_.max_depth_diff
             ? Judgment::kYes
             : Judgment::kNo;
}

void ClassifierEndpoint::Validate() const {
  if (base_url.empty()) {
    throw Error(ErrorCode::kConfigError,
                "remote backend needs a classifier URL (--classifier-url or "
                "MINGLE_CLASSIFIER_URL)");
  }
  if (timeout.count() <= 0) {
    throw Error(ErrorCode::kConfigError, "classifier timeout must be > 0");
  }
  if (max_retries < 0) {
    throw Error(ErrorCode::kConfigError, "max_retries must be >= 0");
  }
  if (max_inflight < 1) {
    throw Error(ErrorCode::kConfigError, "max_inflight must be >= 1");
  }
}

std::string ClassifierUrlFromEnv() {
  const char* url = std::getenv("MINGLE_CLASSIFIER_URL");
  return url == nullptr ? std::string() : std::string(url);
}

RemoteBackend::RemoteBackend(ClassifierEndpoint endpoint,
                             std::string prompt_template, double pad_fraction,
                             std::uint64_t seed)
    : endpoint_(std::move(endpoint)),
      prompt_template_(std::move(prompt_template)),
      pad_fraction_(pad_fraction),
      seed_(seed) {
  endpoint_.Validate();
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint_.base_url, m, kUrl)) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("malformed classifier URL '{}'", endpoint_.base_url));
  }
  scheme_host_port_ = m[1].str();
  path_prefix_ = m[2].str();
  while (!path_prefix_.empty() && path_prefix_.back() == '/') {
    path_prefix_.pop_back();
  }
  // Fail fast on a template that cannot render.
  BuildPrompt(prompt_template_, DepthCue{});
}

std::chrono::milliseconds RemoteBackend::BackoffDelay(int retry,
                                                      std::uint64_t salt) const {
  const double base = static_cast<double>(endpoint_.backoff_base.count()) *
                      std::pow(endpoint_.backoff_multiplier, retry - 1);
  const std::uint64_t r = SplitMix64(seed_ ^ SplitMix64(salt + retry));
  const double jitter = 0.5 + static_cast<double>(r >> 11) * 0x1.0p-53;
  return std::chrono::milliseconds(static_cast<std::int64_t>(base * jitter));
}

Judgment RemoteBackend::ClassifyQuery(const PairQuery& query) {
  const std::string body =
      nlohmann::json{{"rgb_b64", Base64Encode(EncodePng(query.rgb_crop))},
                     {"depth_b64", Base64Encode(EncodePng(query.depth_crop))},
                     {"prompt", query.prompt},
                     {"pair_id", query.pair_id()}}
          .dump();
  const std::string path = path_prefix_ + "/classify";
  const std::uint64_t salt = std::hash<std::string>{}(query.pair_id());

  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
      endpoint_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
                         endpoint_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::string last_failure;
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(BackoffDelay(attempt, salt));
    ++requests_sent_;
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
    } else if (res->status != 200) {
      last_failure = fmt::format("HTTP {}", res->status);
    } else {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kBackendError,
                    fmt::format("{}: response is not JSON: {}",
                                query.pair_id(), e.what()));
      }
      if (!reply.is_object() || !reply.contains("answer") ||
          !reply["answer"].is_string()) {
        throw Error(ErrorCode::kBackendError,
                    fmt::format("{}: response lacks a string 'answer'",
                                query.pair_id()));
      }
      bool recognized = true;
      const Judgment j =
          ParseAnswer(reply["answer"].get<std::string>(), &recognized);
      if (!recognized) ++unparsed_answers_;
      return j;
    }
    spdlog::debug("{}: attempt {} failed: {}", query.pair_id(), attempt + 1,
                  last_failure);
  }
  throw Error(ErrorCode::kRemoteUnavailable,
              fmt::format("{}: classifier unavailable after {} attempts ({})",
                          query.pair_id(), endpoint_.max_retries + 1,
                          last_failure));
}

Judgment RemoteBackend::Classify(const PairTask& task) {
  if (task.imagery == nullptr) {
    throw Error(ErrorCode::kBackendError, "remote backend needs scene imagery");
  }
  const Scene& scene = *task.scene;
  return ClassifyQuery(BuildPairQuery(
      scene, *task.imagery, scene.persons[task.index_a].person_id,
      scene.persons[task.index_b].person_id, pad_fraction_, prompt_template_));
}

std::vector<Judgment> RemoteBackend::ClassifyBatch(
    std::span<const PairTask> tasks) {
  std::vector<Judgment> out(tasks.size(), Judgment::kNotSure);
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(endpoint_.max_inflight), tasks.size());
  if (workers <= 1) return ClassifierBackend::ClassifyBatch(tasks);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  std::size_t error_index = tasks.size();
  std::exception_ptr error;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size() && !failed; i = next++) {
          try {
            out[i] = Classify(tasks[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            // Report the lowest failing index so the error is reproducible.
            if (i < error_index) {
              error_index = i;
              error = std::current_exception();
            }
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace groupscope
