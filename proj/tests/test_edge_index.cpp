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
#include <doctest.h>

#include <random>

#include "ghsf/edge_index.hpp"
#include "test_util.hpp"

using namespace ghsf;

namespace {

// Reference the hash table must agree with: scan the receiver's row.
EdgeIdx linear_search(const LocalGraph& g, VertexId sender,
                      VertexId receiver) {
  if (!g.owns(receiver)) return kNoEdge;
  const VertexId lv = g.to_local(receiver);
  for (std::uint64_t e = g.row_offsets[lv]; e < g.row_offsets[lv + 1]; ++e) {
    if (g.col_targets[e] == sender) return static_cast<EdgeIdx>(e);
  }
  return kNoEdge;
}

}  // namespace

TEST_CASE("get_hash arithmetic") {
  CHECK(get_hash(0, 0, 97) == 0);
  CHECK(get_hash(1, 0, std::uint64_t(1) << 32) == 0);
  // (2^32 + 5) mod 97: 97 * 44278013 = 4294967261, remainder 40.
  CHECK(get_hash(1, 5, 97) == 40);
}

TEST_CASE("default table sizing") {
  CHECK(default_table_size(13) == 55);
  CHECK(default_table_size(0) == 1);
  // The 5*11/13 factor shrinks tiny tables below the edge count; the
  // clamp keeps one free slot.
  CHECK(default_table_size(1) == 4);
  CHECK(default_table_size(3) == 12);
  CHECK(default_table_size(1000) == 4230);
}

TEST_CASE("single-edge graph lookups") {
  const EdgeList g = testutil::make_graph(2, {Edge{0, 1, 0.5}});
  const auto parts = partition_block(g, 1);
  const EdgeIndexTable t =
      EdgeIndexTable::build(parts[0], default_table_size(2));
  // Entry 0 is vertex 0's side, entry 1 vertex 1's side.
  CHECK(t.lookup(1, 0) == 0);
  CHECK(t.lookup(0, 1) == 1);
  CHECK(t.lookup(0, 0) == kNoEdge);
  CHECK(t.lookup(1, 1) == kNoEdge);
}

TEST_CASE("build rejects a table that cannot stay sparse") {
  const EdgeList g = testutil::make_graph(2, {Edge{0, 1, 0.5}});
  const auto parts = partition_block(g, 1);
  CHECK_THROWS_AS(EdgeIndexTable::build(parts[0], 2), ParameterError);
  CHECK_NOTHROW(EdgeIndexTable::build(parts[0], 3));
}

TEST_CASE("hash lookups agree with linear search") {
  const EdgeList g = preprocess(generate_rmat(4, 32, 1));
  for (const LocalGraph& p : partition_block(g, 4)) {
    const EdgeIndexTable t =
        EdgeIndexTable::build(p, default_table_size(p.local_edge_count()));

    // Every stored directional pair.
    for (VertexId lv = 0; lv < p.local_vertex_count(); ++lv) {
      const VertexId receiver = p.first_vertex + lv;
      for (std::uint64_t e = p.row_offsets[lv]; e < p.row_offsets[lv + 1];
           ++e) {
        CHECK(t.lookup(p.col_targets[e], receiver) == e);
      }
    }

    // Random probes, most of them misses.
    std::mt19937_64 rng(99);
    for (int i = 0; i < 10000; ++i) {
      const VertexId s = static_cast<VertexId>(rng() % g.num_vertices);
      const VertexId r = static_cast<VertexId>(
          p.first_vertex + rng() % p.local_vertex_count());
      CHECK(t.lookup(s, r) == linear_search(p, s, r));
    }
  }
}
