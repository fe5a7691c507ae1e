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
#ifndef GHSF_EDGE_INDEX_HPP
#define GHSF_EDGE_INDEX_HPP

#include <cstdint>
#include <vector>

#include "ghsf/graph.hpp"
#include "ghsf/types.hpp"

namespace ghsf {

// ((u << 32) | v) mod table_size.
inline std::uint64_t get_hash(VertexId u, VertexId v,
                              std::uint64_t table_size) {
  return ((static_cast<std::uint64_t>(u) << 32) | v) % table_size;
}

// local_actual_m * 5 * 11 / 13 with truncating division, clamped so the
// table is never full.
std::uint64_t default_table_size(std::uint64_t local_edge_count);

// Open-addressed map from (sender vertex, receiver vertex) to the local
// CSR entry the message arrived on. Linear probing; built once at
// startup, immutable afterwards.
class EdgeIndexTable {
 public:
  EdgeIndexTable() = default;

  // One key per CSR entry: a message from s to r resolves to the entry
  // (row r, target s). Throws ParameterError if table_size does not
  // exceed the local edge count.
  static EdgeIndexTable build(const LocalGraph& g, std::uint64_t table_size);

  // Local entry index, or kNoEdge if no such edge is stored here.
  EdgeIdx lookup(VertexId sender, VertexId receiver) const;

  std::uint64_t table_size() const { return slots_.size(); }

 private:
  struct Slot {
    std::uint64_t key = kEmptyKey;
    EdgeIdx value = kNoEdge;
  };

  // A key with equal halves cannot occur once loops are removed, so the
  // zero key marks an empty slot without a separate occupancy bitmap.
  static constexpr std::uint64_t kEmptyKey = 0;

  static constexpr std::uint64_t pack(VertexId sender, VertexId receiver) {
    return (static_cast<std::uint64_t>(sender) << 32) | receiver;
  }

  std::vector<Slot> slots_;
};

}  // namespace ghsf

#endif  // GHSF_EDGE_INDEX_HPP
