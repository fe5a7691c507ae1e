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
#ifndef GHSF_WEIGHTS_HPP
#define GHSF_WEIGHTS_HPP

#include <cstdint>
#include <utility>

#include "ghsf/types.hpp"

namespace ghsf {

struct LocalGraph;

// Edge weight extended with the endpoint pair so that any two distinct
// edges of the graph compare strictly. Ordering is lexicographic on
// (w, tie_lo, tie_hi); the real part is compared exactly, no epsilon.
struct ExtendedWeight {
  double w = 0.0;
  VertexId tie_lo = 0;  // min(u, v)
  VertexId tie_hi = 0;  // max(u, v)

  // Endpoint pair packed as min||max into one 64-bit word.
  constexpr std::uint64_t special_id() const {
    return (std::uint64_t(tie_lo) << 32) | tie_hi;
  }

  friend constexpr bool operator==(const ExtendedWeight&,
                                   const ExtendedWeight&) = default;
  friend constexpr bool operator<(const ExtendedWeight& a,
                                  const ExtendedWeight& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.tie_lo != b.tie_lo) return a.tie_lo < b.tie_lo;
    return a.tie_hi < b.tie_hi;
  }
  friend constexpr bool operator>(const ExtendedWeight& a,
                                  const ExtendedWeight& b) {
    return b < a;
  }
};

// Narrow substitute for ExtendedWeight. Valid only when every worker's
// local raw weights are pairwise distinct: two equal-weight edges then
// live on disjoint worker sets, so the smallest owning rank separates
// them. Ordering is lexicographic on (w, tie_rank).
struct CompressedWeight {
  double w = 0.0;
  std::uint32_t tie_rank = 0;  // minimal rank of a worker storing the edge

  friend constexpr bool operator==(const CompressedWeight&,
                                   const CompressedWeight&) = default;
  friend constexpr bool operator<(const CompressedWeight& a,
                                  const CompressedWeight& b) {
    if (a.w != b.w) return a.w < b.w;
    return a.tie_rank < b.tie_rank;
  }
};

// Throws ParameterError on u == v (loops carry no usable tie-breaker).
ExtendedWeight extended_weight(VertexId u, VertexId v, double w);

// True iff no two locally stored edges share a raw weight. An edge with
// both endpoints in the worker counts once, not once per direction.
bool verify_local_uniqueness(const LocalGraph& g);

// tie_rank = min(owner_ranks). Callers must have checked uniqueness on
// every worker first; see the engine's mode negotiation.
CompressedWeight compress_weight(const ExtendedWeight& ew,
                                 std::pair<WorkerId, WorkerId> owner_ranks);

}  // namespace ghsf

#endif  // GHSF_WEIGHTS_HPP
