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


#ifndef GROUPSCOPE_RUN_CONFIG_H_
#define GROUPSCOPE_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "groupscope/classifier.h"
#include "groupscope/pipeline.h"
#include "json.hpp"

namespace groupscope {

enum class BackendKind { kRemote, kHeuristic, kOracle };

BackendKind BackendKindFromName(const std::string& name);  // kConfigError

// Settings shared by the pipeline subcommands. JSON config keys use the
// field names below; command-line flags override them.
struct RunConfig {
  std::string manifest;
  std::string backend = "heuristic";
  double tau_det = 0.5;
  double tau_d = 0.4;
  int tau_z = 80;
  double pad_fraction = 0.1;
  double w_yes = 1.0;
  double w_no = -1.0;
  double w_notsure = -1.0;
  std::string prompt_template;  // empty: built-in template
  std::string classifier_url;   // empty: MINGLE_CLASSIFIER_URL
  int timeout_ms = 30000;
  int max_retries = 3;
  int max_inflight = 4;
  int backoff_base_ms = 250;
  double heuristic_max_distance = 0.10;
  int heuristic_max_depth_diff = 10;
  std::string out_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;

  // Overwrites fields present in `j`; unknown keys throw kConfigError.
  void MergeJson(const nlohmann::json& j);
  void MergeJsonFile(const std::filesystem::path& path);

  // Checks ranges and that exactly one known backend is named.
  void Validate() const;

  PipelineConfig ToPipelineConfig() const;
  ClassifierEndpoint ToEndpoint() const;  // URL falls back to the env var
  std::unique_ptr<ClassifierBackend> MakeBackend() const;
};

}  // namespace groupscope

#endif  // GROUPSCOPE_RUN_CONFIG_H_
