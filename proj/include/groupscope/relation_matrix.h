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


#ifndef GROUPSCOPE_RELATION_MATRIX_H_
#define GROUPSCOPE_RELATION_MATRIX_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace groupscope {

enum class Judgment : std::uint8_t { kYes, kNo, kNotSure };

std::string_view JudgmentName(Judgment j);  // "yes", "no", "not sure"
std::optional<Judgment> JudgmentFromName(std::string_view name);

// Where a matrix entry came from. The two filtered causes are kept apart so
// run summaries can report them separately.
enum class Provenance : std::uint8_t {
  kDefault,
  kFilteredDistance,
  kFilteredDepth,
  kClassified,
};

inline bool IsFiltered(Provenance p) {
  return p == Provenance::kFilteredDistance || p == Provenance::kFilteredDepth;
}

// Symmetric n x n matrix of pairwise judgments indexed by position in a
// scene's person list. Every entry starts as (NotSure, Default); `Set`
// writes both (i, j) and (j, i). Diagonal entries are never written.
class RelationMatrix {
 public:
  RelationMatrix() = default;
  explicit RelationMatrix(int n);

  int size() const { return n_; }
  Judgment at(int i, int j) const { return entries_[Index(i, j)]; }
  Provenance provenance(int i, int j) const { return provenance_[Index(i, j)]; }

  // Requires i != j. A filtered provenance forces the judgment to No.
  void Set(int i, int j, Judgment judgment, Provenance provenance);

  bool IsSymmetric() const;
  bool operator==(const RelationMatrix&) const = default;

 private:
  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<Judgment> entries_;
  std::vector<Provenance> provenance_;
};

}  // namespace groupscope

#endif  // GROUPSCOPE_RELATION_MATRIX_H_
