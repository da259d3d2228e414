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


#ifndef GROUPSCOPE_CLUSTERING_H_
#define GROUPSCOPE_CLUSTERING_H_

#include <span>
#include <vector>

#include "groupscope/relation_matrix.h"
#include "groupscope/scene.h"

namespace groupscope {

// Contribution of one intra-cluster pair to the agreement score.
struct AgreementWeights {
  double yes = 1.0;        // > 0
  double no = -1.0;        // <= 0
  double not_sure = -1.0;  // <= 0

  void Validate() const;
  double operator()(Judgment j) const {
    switch (j) {
      case Judgment::kYes: return yes;
      case Judgment::kNo: return no;
      case Judgment::kNotSure: return not_sure;
    }
    return not_sure;
  }
};

// Disjoint clusters of matrix indices covering 0..n-1. The canonical form
// (see Normalize) sorts each cluster and orders clusters by their minimum.
struct Partition {
  std::vector<std::vector<int>> clusters;

  static Partition Singletons(int n);
  void Normalize();
  int element_count() const;
  bool operator==(const Partition&) const = default;
};

// Sum of weights over every intra-cluster unordered pair. Throws
// kCoverageMismatch unless `partition` covers exactly 0..m.size()-1.
double AgreementScore(const Partition& partition, const RelationMatrix& m,
                      const AgreementWeights& w);

struct MergeStep {
  std::vector<int> first;   // cluster with the smaller minimum
  std::vector<int> second;
  double gain = 0.0;
};

// Agglomerative merging from singletons. Each round merges the cluster pair
// with the largest gain (sum of cross-pair weights), provided it is
// strictly positive; ties go to the lexicographically smallest
// (min of first, min of second). `trace`, when given, receives every merge.
Partition GreedyCluster(const RelationMatrix& m, const AgreementWeights& w,
                        std::vector<MergeStep>* trace = nullptr);

inline constexpr int kExhaustiveMaxPersons = 10;

// Best-scoring partition over all set partitions. Ties prefer more
// clusters, then the lexicographically smallest cluster-label sequence
// (person k labelled by the rank of its cluster's minimum). Throws
// kTooLarge above kExhaustiveMaxPersons.
Partition ExhaustiveCluster(const RelationMatrix& m, const AgreementWeights& w);

// Clusters of size >= 2 as group regions, ordered by smallest member id.
std::vector<GroupRegion> ExtractGroups(const Partition& partition,
                                       std::span<const PersonDetection> persons);

}  // namespace groupscope

#endif  // GROUPSCOPE_CLUSTERING_H_
