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


// Brute-force reference computations. Each follows a different route from
// the library code it checks.

#ifndef GROUPSCOPE_TESTS_ORACLES_H_
#define GROUPSCOPE_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "groupscope/clustering.h"
#include "groupscope/relation_matrix.h"

namespace groupscope::testing {

// IoU of integer boxes by counting unit cells.
inline double RasterIou(int ax1, int ay1, int ax2, int ay2, int bx1, int by1,
                        int bx2, int by2) {
  long inter = 0, uni = 0;
  const int x_lo = std::min(ax1, bx1), x_hi = std::max(ax2, bx2);
  const int y_lo = std::min(ay1, by1), y_hi = std::max(ay2, by2);
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      const bool in_a = x >= ax1 && x < ax2 && y >= ay1 && y < ay2;
      const bool in_b = x >= bx1 && x < bx2 && y >= by1 && y < by2;
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

// Lower median by full sort.
inline int SortedLowerMedian(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

// Every set partition of {0..n-1}, generated by recursive insertion of each
// element into an existing block or a new one.
inline std::vector<Partition> AllPartitions(int n) {
  std::vector<Partition> out;
  Partition current;
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      Partition p = current;
      p.Normalize();
      out.push_back(p);
      return;
    }
    // Indexed: the recursion may grow `current.clusters`.
    for (std::size_t b = 0; b < current.clusters.size(); ++b) {
      current.clusters[b].push_back(k);
      rec(k + 1);
      current.clusters[b].pop_back();
    }
    current.clusters.push_back({k});
    rec(k + 1);
    current.clusters.pop_back();
  };
  rec(0);
  return out;
}

// Direct pair sum, independent of AgreementScore.
inline double PairSumScore(const Partition& p, const RelationMatrix& m,
                           const AgreementWeights& w) {
  std::vector<int> label(m.size(), -1);
  for (std::size_t c = 0; c < p.clusters.size(); ++c) {
    for (int i : p.clusters[c]) label[i] = static_cast<int>(c);
  }
  double s = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = i + 1; j < m.size(); ++j) {
      if (label[i] == label[j]) s += w(m.at(i, j));
    }
  }
  return s;
}

inline double BestScoreByEnumeration(const RelationMatrix& m,
                                     const AgreementWeights& w) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Partition& p : AllPartitions(m.size())) {
    best = std::max(best, PairSumScore(p, m, w));
  }
  return best;
}

}  // namespace groupscope::testing

#endif  // GROUPSCOPE_TESTS_ORACLES_H_
