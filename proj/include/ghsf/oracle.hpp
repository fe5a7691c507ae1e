/*
Copyright (c) 2026 The ghsf authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#ifndef GHSF_ORACLE_HPP
#define GHSF_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ghsf/graph.hpp"

namespace ghsf {

// Union-find with path compression and union by rank.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0), sets_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // False if x and y were already in the same set.
  bool unite(std::size_t x, std::size_t y) {
    std::size_t rx = find(x), ry = find(y);
    if (rx == ry) return false;
    if (rank_[rx] < rank_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    if (rank_[rx] == rank_[ry]) ++rank_[rx];
    --sets_;
    return true;
  }

  std::size_t set_count() const { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::size_t sets_;
};

struct MsfResult {
  EdgeList forest;
  double total_weight = 0.0;
};

// Sequential Kruskal under the ExtendedWeight order. Tolerates loops and
// parallel edges, so it doubles as the dedup-aware reference for raw
// generator output.
MsfResult kruskal_msf(const EdgeList& g);

// True iff the two forests contain the same unordered endpoint pairs.
bool forests_equal(const EdgeList& a, const EdgeList& b);

}  // namespace ghsf

#endif  // GHSF_ORACLE_HPP
