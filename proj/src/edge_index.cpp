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
#include "ghsf/edge_index.hpp"

#include <algorithm>
#include <string>

namespace ghsf {

std::uint64_t default_table_size(std::uint64_t local_edge_count) {
  const std::uint64_t sized = local_edge_count * 5 * 11 / 13;
  return std::max(sized, local_edge_count + 1);
}

EdgeIndexTable EdgeIndexTable::build(const LocalGraph& g,
                                     std::uint64_t table_size) {
  if (table_size <= g.local_edge_count()) {
    throw ParameterError("hash table size " + std::to_string(table_size) +
                         " must exceed local edge count " +
                         std::to_string(g.local_edge_count()));
  }
  EdgeIndexTable t;
  t.slots_.assign(table_size, Slot{});
  for (VertexId lv = 0; lv < g.local_vertex_count(); ++lv) {
    const VertexId receiver = g.first_vertex + lv;
    for (std::uint64_t e = g.row_offsets[lv]; e < g.row_offsets[lv + 1]; ++e) {
      const VertexId sender = g.col_targets[e];
      const std::uint64_t key = pack(sender, receiver);
      std::uint64_t at = get_hash(sender, receiver, table_size);
      while (t.slots_[at].key != kEmptyKey) {
        at = (at + 1) % table_size;
      }
      t.slots_[at] = Slot{key, static_cast<EdgeIdx>(e)};
    }
  }
  return t;
}

EdgeIdx EdgeIndexTable::lookup(VertexId sender, VertexId receiver) const {
  const std::uint64_t key = pack(sender, receiver);
  std::uint64_t at = get_hash(sender, receiver, slots_.size());
  while (slots_[at].key != kEmptyKey) {
    if (slots_[at].key == key) return slots_[at].value;
    at = (at + 1) % slots_.size();
  }
  return kNoEdge;
}

}  // namespace ghsf
