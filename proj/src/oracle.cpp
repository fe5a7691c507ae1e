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
#include "ghsf/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace ghsf {

MsfResult kruskal_msf(const EdgeList& g) {
  std::vector<std::size_t> order;
  order.reserve(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].u != g.edges[i].v) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Edge& ea = g.edges[a];
    const Edge& eb = g.edges[b];
    return extended_weight(ea.u, ea.v, ea.w) <
           extended_weight(eb.u, eb.v, eb.w);
  });

  MsfResult r;
  r.forest.num_vertices = g.num_vertices;
  DisjointSet dsu(g.num_vertices);
  for (std::size_t i : order) {
    const Edge& e = g.edges[i];
    if (dsu.unite(e.u, e.v)) {
      r.forest.edges.push_back(e);
      r.total_weight += e.w;
    }
  }
  return r;
}

bool forests_equal(const EdgeList& a, const EdgeList& b) {
  if (a.edges.size() != b.edges.size()) return false;
  auto pairs = [](const EdgeList& g) {
    std::vector<std::pair<VertexId, VertexId>> ps;
    ps.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
      ps.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    std::sort(ps.begin(), ps.end());
    return ps;
  };
  return pairs(a) == pairs(b);
}

}  // namespace ghsf
