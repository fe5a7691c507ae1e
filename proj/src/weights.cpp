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
#include "ghsf/weights.hpp"

#include <algorithm>
#include <vector>

#include "ghsf/graph.hpp"

namespace ghsf {

ExtendedWeight extended_weight(VertexId u, VertexId v, double w) {
  if (u == v) {
    throw ParameterError("extended_weight: self-loop " + std::to_string(u));
  }
  return ExtendedWeight{w, std::min(u, v), std::max(u, v)};
}

bool verify_local_uniqueness(const LocalGraph& g) {
  std::vector<double> ws;
  ws.reserve(g.local_edge_count());
  // Count each logical edge once: an intra-worker edge has two entries,
  // keep the one whose row id is the smaller endpoint.
  for (VertexId lv = 0; lv < g.local_vertex_count(); ++lv) {
    const VertexId row = g.first_vertex + lv;
    for (std::uint64_t e = g.row_offsets[lv]; e < g.row_offsets[lv + 1]; ++e) {
      const VertexId t = g.col_targets[e];
      if (!g.owns(t) || row < t) ws.push_back(g.edge_weights[e].w);
    }
  }
  std::sort(ws.begin(), ws.end());
  return std::adjacent_find(ws.begin(), ws.end()) == ws.end();
}

CompressedWeight compress_weight(const ExtendedWeight& ew,
                                 std::pair<WorkerId, WorkerId> owner_ranks) {
  const WorkerId r = std::min(owner_ranks.first, owner_ranks.second);
  if (r < 0) {
    throw ParameterError("compress_weight: negative worker rank");
  }
  return CompressedWeight{ew.w, static_cast<std::uint32_t>(r)};
}

}  // namespace ghsf
