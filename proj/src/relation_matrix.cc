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


#include "groupscope/relation_matrix.h"

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {

std::string_view JudgmentName(Judgment j) {
  switch (j) {
    case Judgment::kYes: return "yes";
    case Judgment::kNo: return "no";
    case Judgment::kNotSure: return "not sure";
  }
  return "not sure";
}

std::optional<Judgment> JudgmentFromName(std::string_view name) {
  if (name == "yes") return Judgment::kYes;
  if (name == "no") return Judgment::kNo;
  if (name == "not sure") return Judgment::kNotSure;
  return std::nullopt;
}

RelationMatrix::RelationMatrix(int n)
    : n_(n),
      entries_(static_cast<std::size_t>(n) * n, Judgment::kNotSure),
      provenance_(static_cast<std::size_t>(n) * n, Provenance::kDefault) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative matrix size");
}

void RelationMatrix::Set(int i, int j, Judgment judgment,
                         Provenance provenance) {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("bad matrix cell ({}, {}) for n = {}", i, j, n_));
  }
  if (IsFiltered(provenance)) judgment = Judgment::kNo;
  entries_[Index(i, j)] = entries_[Index(j, i)] = judgment;
  provenance_[Index(i, j)] = provenance_[Index(j, i)] = provenance;
}

bool RelationMatrix::IsSymmetric() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i) || provenance(i, j) != provenance(j, i)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace groupscope
