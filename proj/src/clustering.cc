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


#include "groupscope/clustering.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "groupscope/error.h"
#include "groupscope/geometry.h"

namespace groupscope {
namespace {

// Score ties closer than this are treated as equal by the exhaustive search.
constexpr double kScoreTieEpsilon = 1e-9;

}  // namespace

void AgreementWeights::Validate() const {
  if (!(yes > 0.0) || !(no <= 0.0) || !(not_sure <= 0.0)) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("weights need yes > 0, no <= 0, not_sure <= 0; got "
                            "{}, {}, {}",
                            yes, no, not_sure));
  }
}

Partition Partition::Singletons(int n) {
  Partition p;
  for (int i = 0; i < n; ++i) p.clusters.push_back({i});
  return p;
}

void Partition::Normalize() {
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::erase_if(clusters, [](const auto& c) { return c.empty(); });
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

int Partition::element_count() const {
  int n = 0;
  for (const auto& c : clusters) n += static_cast<int>(c.size());
  return n;
}

double AgreementScore(const Partition& partition, const RelationMatrix& m,
                      const AgreementWeights& w) {
  const int n = m.size();
  std::vector<int> seen(n, 0);
  for (const auto& c : partition.clusters) {
    if (c.empty()) {
      throw Error(ErrorCode::kCoverageMismatch, "partition has an empty cluster");
    }
    for (int i : c) {
      if (i < 0 || i >= n || seen[i]++ > 0) {
        throw Error(ErrorCode::kCoverageMismatch,
                    fmt::format("partition index {} invalid or repeated for "
                                "n = {}",
                                i, n));
      }
    }
  }
  if (partition.element_count() != n) {
    throw Error(ErrorCode::kCoverageMismatch,
                fmt::format("partition covers {} of {} persons",
                            partition.element_count(), n));
  }
  double score = 0.0;
  for (const auto& c : partition.clusters) {
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t b = a + 1; b < c.size(); ++b) score += w(m.at(c[a], c[b]));
    }
  }
  return score;
}

Partition GreedyCluster(const RelationMatrix& m, const AgreementWeights& w,
                        std::vector<MergeStep>* trace) {
  const int n = m.size();
  Partition p = Partition::Singletons(n);
  // gain[a][b]: sum of weights between clusters a and b (symmetric).
  std::vector<std::vector<double>> gain(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) gain[i][j] = w(m.at(i, j));
    }
  }
  // Clusters stay ordered by their minimum element, so scanning (a, b) in
  // index order visits candidate pairs in tie-break order.
  while (p.clusters.size() > 1) {
    const std::size_t k = p.clusters.size();
    std::size_t best_a = 0, best_b = 0;
    double best = 0.0;
    bool found = false;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (gain[a][b] > 0.0 && (!found || gain[a][b] > best)) {
          best = gain[a][b];
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    if (!found) break;
    if (trace != nullptr) {
      trace->push_back({p.clusters[best_a], p.clusters[best_b], best});
    }
    auto& target = p.clusters[best_a];
    target.insert(target.end(), p.clusters[best_b].begin(),
                  p.clusters[best_b].end());
    std::sort(target.begin(), target.end());
    for (std::size_t c = 0; c < k; ++c) {
      gain[best_a][c] += gain[best_b][c];
      gain[c][best_a] = gain[best_a][c];
    }
    gain[best_a][best_a] = 0.0;
    p.clusters.erase(p.clusters.begin() + best_b);
    gain.erase(gain.begin() + best_b);
    for (auto& row : gain) row.erase(row.begin() + best_b);
  }
  return p;
}

Partition ExhaustiveCluster(const RelationMatrix& m,
                            const AgreementWeights& w) {
  const int n = m.size();
  if (n > kExhaustiveMaxPersons) {
    throw Error(ErrorCode::kTooLarge,
                fmt::format("exhaustive clustering limited to {} persons, got {}",
                            kExhaustiveMaxPersons, n));
  }
  if (n == 0) return Partition{};
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) weight[i][j] = w(m.at(i, j));
    }
  }
  // Restricted growth strings enumerate each set partition exactly once,
  // in lexicographic order: label[0] = 0, label[k] <= 1 + max(label[<k]).
  std::vector<int> label(n, 0), prefix_max(n, 0);
  std::vector<int> best_label = label;
  double best_score = -INFINITY;
  int best_clusters = 0;
  while (true) {
    double score = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (label[i] == label[j]) score += weight[i][j];
      }
    }
    const int clusters = prefix_max[n - 1] + 1;
    if (score > best_score + kScoreTieEpsilon ||
        (std::abs(score - best_score) <= kScoreTieEpsilon &&
         clusters > best_clusters)) {
      best_score = score;
      best_clusters = clusters;
      best_label = label;
    }
    // Next restricted growth string.
    int k = n - 1;
    while (k > 0 && label[k] > prefix_max[k - 1]) --k;
    if (k == 0) break;
    ++label[k];
    prefix_max[k] = std::max(prefix_max[k - 1], label[k]);
    for (int t = k + 1; t < n; ++t) {
      label[t] = 0;
      prefix_max[t] = prefix_max[t - 1];
    }
  }
  Partition p;
  p.clusters.resize(best_clusters);
  for (int i = 0; i < n; ++i) p.clusters[best_label[i]].push_back(i);
  p.Normalize();
  return p;
}

std::vector<GroupRegion> ExtractGroups(const Partition& partition,
                                       std::span<const PersonDetection> persons) {
  std::vector<GroupRegion> groups;
  for (const auto& cluster : partition.clusters) {
    if (cluster.size() < 2) continue;
    GroupRegion g;
    std::vector<BBox> boxes;
    for (int idx : cluster) {
      if (idx < 0 || idx >= static_cast<int>(persons.size())) {
        throw Error(ErrorCode::kCoverageMismatch,
                    fmt::format("cluster index {} outside {} persons", idx,
                                persons.size()));
      }
      g.member_ids.push_back(persons[idx].person_id);
      boxes.push_back(persons[idx].bbox);
    }
    std::sort(g.member_ids.begin(), g.member_ids.end());
    g.bbox = EnclosingBBox(boxes);
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.member_ids.front() < b.member_ids.front();
  });
  return groups;
}

}  // namespace groupscope
