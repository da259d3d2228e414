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


#ifndef GROUPSCOPE_TESTS_TEST_UTIL_H_
#define GROUPSCOPE_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "groupscope/geometry.h"
#include "groupscope/classifier.h"
#include "groupscope/random.h"
#include "groupscope/scene.h"

namespace groupscope::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("groupscope_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
}

// Random valid box inside a width x height image.
inline BBox RandomBox(Rng& rng, double width, double height) {
  double x1 = rng.Uniform(0.0, width - 1.0);
  double y1 = rng.Uniform(0.0, height - 1.0);
  double x2 = rng.Uniform(x1 + 1e-3, width);
  double y2 = rng.Uniform(y1 + 1e-3, height);
  return BBox::Create(x1, y1, x2, y2);
}

// Scene of `n` random persons with median depths already assigned.
inline Scene RandomScene(Rng& rng, int n, int width = 640, int height = 480) {
  Scene s;
  s.scene_id = "rand";
  s.image = ImageGeometry::Create(width, height);
  for (int k = 0; k < n; ++k) {
    s.persons.push_back({k * 3 + 1, RandomBox(rng, width, height), 1.0,
                         rng.UniformInt(0, 255)});
  }
  return s;
}

// Deterministic pseudo-random answers keyed on the person ids, with a call
// counter.
class ScriptedBackend final : public ClassifierBackend {
 public:
  explicit ScriptedBackend(std::uint64_t salt = 0) : salt_(salt) {}

  std::string_view name() const override { return "scripted"; }
  Judgment Classify(const PairTask& task) override {
    ++calls;
    const int a = task.scene->persons[task.index_a].person_id;
    const int b = task.scene->persons[task.index_b].person_id;
    const std::uint64_t h =
        SplitMix64(salt_ ^ (static_cast<std::uint64_t>(a) << 32 | b));
    return static_cast<Judgment>(h % 3);
  }

  int calls = 0;

 private:
  std::uint64_t salt_;
};

}  // namespace groupscope::testing

#endif  // GROUPSCOPE_TESTS_TEST_UTIL_H_
