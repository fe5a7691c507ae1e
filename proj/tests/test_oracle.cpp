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

#include "ghsf/oracle.hpp"
#include "test_util.hpp"

using namespace ghsf;

namespace {

// Minimum spanning tree by exhaustive subset enumeration; only feasible
// for a handful of vertices, which is exactly its point.
EdgeList brute_force_mst(const EdgeList& g) {
  const std::size_t m = g.edges.size();
  const std::size_t need = g.num_vertices - 1;
  REQUIRE(m < 25);
  double best_weight = 0.0;
  bool found = false;
  std::vector<std::size_t> best;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != need) continue;
    DisjointSet dsu(g.num_vertices);
    double weight = 0.0;
    bool acyclic = true;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < m && acyclic; ++i) {
      if (!(mask & (1u << i))) continue;
      acyclic = dsu.unite(g.edges[i].u, g.edges[i].v);
      weight += g.edges[i].w;
      chosen.push_back(i);
    }
    if (!acyclic || dsu.set_count() != 1) continue;
    if (!found || weight < best_weight) {
      found = true;
      best_weight = weight;
      best = chosen;
    }
  }
  REQUIRE(found);
  EdgeList t;
  t.num_vertices = g.num_vertices;
  for (std::size_t i : best) t.edges.push_back(g.edges[i]);
  return t;
}

}  // namespace

TEST_CASE("kruskal on the triangle") {
  const EdgeList g = testutil::make_graph(
      3, {Edge{0, 1, 0.1}, Edge{1, 2, 0.2}, Edge{0, 2, 0.3}});
  const MsfResult r = kruskal_msf(g);
  REQUIRE(r.forest.edges.size() == 2);
  CHECK(r.total_weight == 0.1 + 0.2);
  CHECK(forests_equal(
      r.forest,
      testutil::make_graph(3, {Edge{0, 1, 0.1}, Edge{1, 2, 0.2}})));
}

TEST_CASE("kruskal on an empty edge set") {
  const EdgeList g = testutil::make_graph(5, {});
  const MsfResult r = kruskal_msf(g);
  CHECK(r.forest.edges.empty());
  CHECK(r.total_weight == 0.0);
}

TEST_CASE("kruskal forest size is V minus component count") {
  const EdgeList g = testutil::disjoint_components({4, 3, 5}, 17);
  const MsfResult r = kruskal_msf(g);
  CHECK(r.forest.edges.size() == 12 - 3);
}

TEST_CASE("kruskal matches brute force on small connected graphs") {
  int checked = 0;
  for (VertexId n = 4; n <= 6; ++n) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      EdgeList g = testutil::random_connected_graph(n, n, seed * 131 + n);
      if (g.edges.size() >= 25) continue;
      const EdgeList expected = brute_force_mst(g);
      const MsfResult got = kruskal_msf(g);
      CHECK(forests_equal(got.forest, expected));
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("forests_equal compares unordered endpoint sets") {
  const EdgeList a =
      testutil::make_graph(4, {Edge{0, 1, 0.1}, Edge{2, 3, 0.2}});
  const EdgeList b =
      testutil::make_graph(4, {Edge{3, 2, 0.2}, Edge{1, 0, 0.1}});
  const EdgeList c =
      testutil::make_graph(4, {Edge{0, 1, 0.1}, Edge{1, 3, 0.2}});
  CHECK(forests_equal(a, a));
  CHECK(forests_equal(a, b));
  CHECK_FALSE(forests_equal(a, c));
  CHECK_FALSE(forests_equal(a, testutil::make_graph(4, {Edge{0, 1, 0.1}})));
}
