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


#include "groupscope/run_config.h"

#include <algorithm>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {
namespace {

constexpr const char* kConfigKeys[] = {
    "manifest", "backend", "tau_det", "tau_d", "tau_z", "pad_fraction",
    "w_yes", "w_no", "w_notsure", "prompt_template", "classifier_url",
    "timeout_ms", "max_retries", "max_inflight", "backoff_base_ms",
    "heuristic_max_distance", "heuristic_max_depth_diff", "out_dir", "jobs",
    "seed"};

template <typename T>
void Take(const nlohmann::json& j, const char* key, T& field) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("config key '{}': {}", key, e.what()));
  }
}

}  // namespace

BackendKind BackendKindFromName(const std::string& name) {
  if (name == "remote") return BackendKind::kRemote;
  if (name == "heuristic") return BackendKind::kHeuristic;
  if (name == "oracle") return BackendKind::kOracle;
  throw Error(ErrorCode::kConfigError,
              fmt::format("unknown backend '{}' (remote, heuristic, oracle)",
                          name));
}

void RunConfig::MergeJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfigError, "config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kConfigKeys), std::end(kConfigKeys), key) ==
        std::end(kConfigKeys)) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("unknown config key '{}'", key));
    }
  }
  Take(j, "manifest", manifest);
  Take(j, "backend", backend);
  Take(j, "tau_det", tau_det);
  Take(j, "tau_d", tau_d);
  Take(j, "tau_z", tau_z);
  Take(j, "pad_fraction", pad_fraction);
  Take(j, "w_yes", w_yes);
  Take(j, "w_no", w_no);
  Take(j, "w_notsure", w_notsure);
  Take(j, "prompt_template", prompt_template);
  Take(j, "classifier_url", classifier_url);
  Take(j, "timeout_ms", timeout_ms);
  Take(j, "max_retries", max_retries);
  Take(j, "max_inflight", max_inflight);
  Take(j, "backoff_base_ms", backoff_base_ms);
  Take(j, "heuristic_max_distance", heuristic_max_distance);
  Take(j, "heuristic_max_depth_diff", heuristic_max_depth_diff);
  Take(j, "out_dir", out_dir);
  Take(j, "jobs", jobs);
  Take(j, "seed", seed);
}

void RunConfig::MergeJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open config {}", path.string()));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("{}: {}", path.string(), e.what()));
  }
  MergeJson(j);
}

void RunConfig::Validate() const {
  const BackendKind kind = BackendKindFromName(backend);
  ToPipelineConfig().Validate();
  if (!(pad_fraction >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "pad_fraction must be >= 0");
  }
  if (!(heuristic_max_distance >= 0.0) || heuristic_max_depth_diff < 0) {
    throw Error(ErrorCode::kConfigError, "heuristic thresholds must be >= 0");
  }
  if (backoff_base_ms < 0) {
    throw Error(ErrorCode::kConfigError, "backoff_base_ms must be >= 0");
  }
  if (kind == BackendKind::kRemote) ToEndpoint().Validate();
}

PipelineConfig RunConfig::ToPipelineConfig() const {
  PipelineConfig c;
  c.tau_det = tau_det;
  c.filter = FilterParams{tau_d, tau_z};
  c.weights = AgreementWeights{w_yes, w_no, w_notsure};
  c.jobs = jobs;
  return c;
}

ClassifierEndpoint RunConfig::ToEndpoint() const {
  ClassifierEndpoint e;
  e.base_url = classifier_url.empty() ? ClassifierUrlFromEnv() : classifier_url;
  e.timeout = std::chrono::milliseconds(timeout_ms);
  e.max_retries = max_retries;
  e.max_inflight = max_inflight;
  e.backoff_base = std::chrono::milliseconds(backoff_base_ms);
  return e;
}

std::unique_ptr<ClassifierBackend> RunConfig::MakeBackend() const {
  switch (BackendKindFromName(backend)) {
    case BackendKind::kOracle:
      return std::make_unique<OracleBackend>();
    case BackendKind::kHeuristic:
      return std::make_unique<HeuristicBackend>(
          HeuristicParams{heuristic_max_distance, heuristic_max_depth_diff});
    case BackendKind::kRemote: {
      std::string tmpl = prompt_template.empty()
                             ? std::string(DefaultPromptTemplate())
                             : LoadPromptTemplate(prompt_template);
      return std::make_unique<RemoteBackend>(ToEndpoint(), std::move(tmpl),
                                             pad_fraction, seed);
    }
  }
  throw Error(ErrorCode::kConfigError, "unknown backend");
}

}  // namespace groupscope
