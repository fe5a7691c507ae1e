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
#ifndef GHSF_GRAPH_HPP
#define GHSF_GRAPH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ghsf/types.hpp"
#include "ghsf/weights.hpp"

namespace ghsf {

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;

  friend constexpr bool operator==(const Edge&, const Edge&) = default;
};

struct EdgeList {
  std::uint64_t num_vertices = 0;
  std::vector<Edge> edges;
};

enum class EdgeState : std::uint8_t { Basic, Branch, Rejected };

// One worker's slice of the graph in CSR form. Rows are the worker's own
// vertices; every incident edge is stored as one directed entry per side,
// so an edge inside the worker occupies two entries and a cross-worker
// edge one entry here plus one on the peer. Entries within a row are
// ordered by ascending ExtendedWeight, not by target id.
struct LocalGraph {
  WorkerId worker_rank = 0;
  WorkerId num_workers = 1;
  VertexId first_vertex = 0;  // global range [first_vertex, last_vertex)
  VertexId last_vertex = 0;
  VertexId block_size = 0;  // ceil(V / num_workers)
  std::uint64_t num_global_vertices = 0;

  std::vector<std::uint64_t> row_offsets;  // local_vertex_count + 1
  std::vector<VertexId> col_targets;       // global ids
  std::vector<ExtendedWeight> edge_weights;
  std::vector<EdgeState> edge_states;  // all Basic after partitioning

  VertexId local_vertex_count() const { return last_vertex - first_vertex; }
  std::uint64_t local_edge_count() const { return col_targets.size(); }

  bool owns(VertexId v) const { return v >= first_vertex && v < last_vertex; }
  VertexId to_local(VertexId global) const { return global - first_vertex; }

  WorkerId owner_of(VertexId v) const {
    return static_cast<WorkerId>(v / block_size);
  }

  // Global vertex id of the row an entry belongs to.
  VertexId row_of_entry(EdgeIdx e) const;
};

// ---- generators -----------------------------------------------------------

// Recursive-quadrant generator with the Graph500 probabilities
// (a, b, c, d) = (0.57, 0.19, 0.19, 0.05). Emits avg_degree * 2^scale raw
// edges; weights are uniform in the open interval (0, 1). Raw output may
// contain loops and parallel edges; run preprocess() before use.
EdgeList generate_rmat(int scale, int avg_degree, std::uint64_t seed);

// Disjoint complete cliques with sizes uniform in [1, 49] (size-biased
// mean degree ~32), joined by one random inter-clique edge per clique.
EdgeList generate_ssca2(int scale, std::uint64_t seed);

// The clique layout generate_ssca2 uses for (scale, seed); sizes sum to
// 2^scale. Deterministic, so callers can locate clique boundaries.
std::vector<VertexId> ssca2_clique_sizes(int scale, std::uint64_t seed);

// avg_degree random neighbours per vertex, endpoints uniform.
EdgeList generate_uniform_random(int scale, int avg_degree,
                                 std::uint64_t seed);

// ---- preprocessing & partitioning -----------------------------------------

// Drops self-loops and, per unordered endpoint pair, keeps only the
// minimum-ExtendedWeight copy (a heavier parallel edge can never be in
// the forest). Kept edges retain their original orientation; output is
// sorted by canonical endpoint pair. Idempotent.
EdgeList preprocess(const EdgeList& raw);

// Contiguous blocks of ceil(V / num_workers) vertices per worker (the
// last block may be short). Throws ParameterError if any worker would
// own no vertices. Input must be preprocessed.
std::vector<LocalGraph> partition_block(const EdgeList& g,
                                        WorkerId num_workers);

// ---- edge-list files -------------------------------------------------------

// Binary format, little-endian: magic "GHSF", u64 vertex count, u64 edge
// count, then per edge u32 u, u32 v, f64 w.
void save_edge_list(const EdgeList& g, const std::string& path);
EdgeList load_edge_list(const std::string& path);

// Whitespace-separated "u v w" lines; vertex count is max id + 1.
void save_edge_list_text(const EdgeList& g, const std::string& path);
EdgeList load_edge_list_text(const std::string& path);

}  // namespace ghsf

#endif  // GHSF_GRAPH_HPP
