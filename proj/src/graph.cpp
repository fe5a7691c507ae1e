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
#include "ghsf/graph.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace ghsf {

namespace {

constexpr char kMagic[4] = {'G', 'H', 'S', 'F'};

// 53-bit uniform double in [0, 1). Built from raw engine output so the
// stream is identical on every platform.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Open interval (0, 1): zero is rejected, one is unreachable.
double open_unit(std::mt19937_64& rng) {
  for (;;) {
    const double x = unit(rng);
    if (x != 0.0) return x;
  }
}

void check_scale(int scale) {
  if (scale < 1 || scale > 31) {
    throw ParameterError("scale must be in [1, 31], got " +
                         std::to_string(scale));
  }
}

void check_degree(int avg_degree) {
  if (avg_degree < 1) {
    throw ParameterError("avg_degree must be >= 1, got " +
                         std::to_string(avg_degree));
  }
}

void check_vertex_ids(const EdgeList& g) {
  for (const Edge& e : g.edges) {
    if (e.u >= g.num_vertices || e.v >= g.num_vertices) {
      throw ParameterError("edge endpoint out of range: (" +
                           std::to_string(e.u) + ", " + std::to_string(e.v) +
                           ") with " + std::to_string(g.num_vertices) +
                           " vertices");
    }
  }
}

// Clique sizes drawn uniform in [1, 49]; a vertex lands in a clique of
// size-biased mean (2*49+1)/3 = 33, i.e. intra-clique degree ~32.
constexpr VertexId kMaxCliqueSize = 49;

std::vector<VertexId> draw_clique_sizes(VertexId num_vertices,
                                        std::mt19937_64& rng) {
  std::vector<VertexId> sizes;
  VertexId total = 0;
  while (total < num_vertices) {
    VertexId s = 1 + static_cast<VertexId>(rng() % kMaxCliqueSize);
    s = std::min(s, num_vertices - total);
    sizes.push_back(s);
    total += s;
  }
  return sizes;
}

}  // namespace

VertexId LocalGraph::row_of_entry(EdgeIdx e) const {
  auto it = std::upper_bound(row_offsets.begin(), row_offsets.end(),
                             static_cast<std::uint64_t>(e));
  return first_vertex + static_cast<VertexId>(it - row_offsets.begin() - 1);
}

EdgeList generate_rmat(int scale, int avg_degree, std::uint64_t seed) {
  check_scale(scale);
  check_degree(avg_degree);
  const std::uint64_t v_count = std::uint64_t(1) << scale;
  const std::uint64_t e_count = v_count * static_cast<std::uint64_t>(avg_degree);

  std::mt19937_64 rng(seed);
  EdgeList g;
  g.num_vertices = v_count;
  g.edges.reserve(e_count);
  for (std::uint64_t i = 0; i < e_count; ++i) {
    VertexId u = 0;
    VertexId v = 0;
    for (int d = 0; d < scale; ++d) {
      const double r = unit(rng);
      // Graph500 partition probabilities (a, b, c, d) = (.57, .19, .19, .05).
      const unsigned ub = (r >= 0.76) ? 1u : 0u;
      const unsigned vb = (r >= 0.57 && r < 0.76) || r >= 0.95 ? 1u : 0u;
      u = (u << 1) | ub;
      v = (v << 1) | vb;
    }
    g.edges.push_back(Edge{u, v, open_unit(rng)});
  }
  return g;
}

std::vector<VertexId> ssca2_clique_sizes(int scale, std::uint64_t seed) {
  check_scale(scale);
  std::mt19937_64 rng(seed);
  return draw_clique_sizes(VertexId(1) << scale, rng);
}

EdgeList generate_ssca2(int scale, std::uint64_t seed) {
  check_scale(scale);
  const VertexId v_count = VertexId(1) << scale;
  std::mt19937_64 rng(seed);
  const std::vector<VertexId> sizes = draw_clique_sizes(v_count, rng);

  EdgeList g;
  g.num_vertices = v_count;
  std::vector<VertexId> starts(sizes.size());
  VertexId start = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    starts[c] = start;
    for (VertexId i = 0; i < sizes[c]; ++i) {
      for (VertexId j = i + 1; j < sizes[c]; ++j) {
        g.edges.push_back(Edge{start + i, start + j, open_unit(rng)});
      }
    }
    start += sizes[c];
  }
  // One random edge out of each clique keeps components few without
  // swamping the clique structure.
  if (sizes.size() > 1) {
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      std::size_t other = rng() % (sizes.size() - 1);
      if (other >= c) ++other;
      const VertexId u = starts[c] + static_cast<VertexId>(rng() % sizes[c]);
      const VertexId v =
          starts[other] + static_cast<VertexId>(rng() % sizes[other]);
      g.edges.push_back(Edge{u, v, open_unit(rng)});
    }
  }
  return g;
}

EdgeList generate_uniform_random(int scale, int avg_degree,
                                 std::uint64_t seed) {
  check_scale(scale);
  check_degree(avg_degree);
  const std::uint64_t v_count = std::uint64_t(1) << scale;

  std::mt19937_64 rng(seed);
  EdgeList g;
  g.num_vertices = v_count;
  g.edges.reserve(v_count * avg_degree);
  for (std::uint64_t u = 0; u < v_count; ++u) {
    for (int k = 0; k < avg_degree; ++k) {
      // v_count is a power of two, so the modulus is exactly uniform.
      const VertexId v = static_cast<VertexId>(rng() % v_count);
      g.edges.push_back(Edge{static_cast<VertexId>(u), v, open_unit(rng)});
    }
  }
  return g;
}

EdgeList preprocess(const EdgeList& raw) {
  check_vertex_ids(raw);
  EdgeList out;
  out.num_vertices = raw.num_vertices;
  out.edges.reserve(raw.edges.size());
  for (const Edge& e : raw.edges) {
    if (e.u != e.v) out.edges.push_back(e);
  }
  // Group parallel copies and keep the lightest; stable sort keeps the
  // surviving copy's original orientation deterministic.
  std::stable_sort(out.edges.begin(), out.edges.end(),
                   [](const Edge& a, const Edge& b) {
                     const auto ka = std::minmax(a.u, a.v);
                     const auto kb = std::minmax(b.u, b.v);
                     if (ka != kb) return ka < kb;
                     return a.w < b.w;
                   });
  auto last = std::unique(out.edges.begin(), out.edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return std::minmax(a.u, a.v) ==
                                   std::minmax(b.u, b.v);
                          });
  out.edges.erase(last, out.edges.end());
  return out;
}

std::vector<LocalGraph> partition_block(const EdgeList& g,
                                        WorkerId num_workers) {
  if (num_workers < 1) {
    throw ParameterError("num_workers must be >= 1");
  }
  const std::uint64_t v_count = g.num_vertices;
  if (static_cast<std::uint64_t>(num_workers) > v_count) {
    throw ParameterError("num_workers (" + std::to_string(num_workers) +
                         ") exceeds vertex count (" + std::to_string(v_count) +
                         "); empty worker ranges are disallowed");
  }
  const VertexId block = static_cast<VertexId>(
      (v_count + static_cast<std::uint64_t>(num_workers) - 1) / num_workers);
  if (static_cast<std::uint64_t>(num_workers - 1) * block >= v_count) {
    throw ParameterError("block size " + std::to_string(block) + " leaves worker " +
                         std::to_string(num_workers - 1) + " without vertices");
  }
  check_vertex_ids(g);

  std::vector<LocalGraph> parts(num_workers);
  for (WorkerId w = 0; w < num_workers; ++w) {
    LocalGraph& p = parts[w];
    p.worker_rank = w;
    p.num_workers = num_workers;
    p.block_size = block;
    p.num_global_vertices = v_count;
    p.first_vertex = static_cast<VertexId>(w) * block;
    p.last_vertex = static_cast<VertexId>(
        std::min<std::uint64_t>(std::uint64_t(w + 1) * block, v_count));
    p.row_offsets.assign(p.local_vertex_count() + 1, 0);
  }

  const auto owner = [block](VertexId v) {
    return static_cast<WorkerId>(v / block);
  };

  // Degree pass: each edge contributes one entry per endpoint's owner.
  for (const Edge& e : g.edges) {
    LocalGraph& pu = parts[owner(e.u)];
    LocalGraph& pv = parts[owner(e.v)];
    ++pu.row_offsets[pu.to_local(e.u) + 1];
    ++pv.row_offsets[pv.to_local(e.v) + 1];
  }
  for (LocalGraph& p : parts) {
    for (std::size_t i = 1; i < p.row_offsets.size(); ++i) {
      p.row_offsets[i] += p.row_offsets[i - 1];
    }
    p.col_targets.resize(p.row_offsets.back());
    p.edge_weights.resize(p.row_offsets.back());
    p.edge_states.assign(p.row_offsets.back(), EdgeState::Basic);
  }

  // Fill pass.
  std::vector<std::vector<std::uint64_t>> cursor(num_workers);
  for (WorkerId w = 0; w < num_workers; ++w) {
    cursor[w].assign(parts[w].row_offsets.begin(),
                     parts[w].row_offsets.end() - 1);
  }
  const auto place = [&](VertexId from, VertexId to, const ExtendedWeight& ew) {
    LocalGraph& p = parts[owner(from)];
    const std::uint64_t at = cursor[p.worker_rank][p.to_local(from)]++;
    p.col_targets[at] = to;
    p.edge_weights[at] = ew;
  };
  for (const Edge& e : g.edges) {
    const ExtendedWeight ew = extended_weight(e.u, e.v, e.w);
    place(e.u, e.v, ew);
    place(e.v, e.u, ew);
  }

  // Rows ordered by ascending weight: the head of the Basic suffix is
  // always the minimum candidate edge.
  std::vector<std::pair<ExtendedWeight, VertexId>> row;
  for (LocalGraph& p : parts) {
    for (VertexId lv = 0; lv < p.local_vertex_count(); ++lv) {
      const std::uint64_t lo = p.row_offsets[lv];
      const std::uint64_t hi = p.row_offsets[lv + 1];
      row.clear();
      for (std::uint64_t i = lo; i < hi; ++i) {
        row.emplace_back(p.edge_weights[i], p.col_targets[i]);
      }
      std::sort(row.begin(), row.end());
      for (std::uint64_t i = lo; i < hi; ++i) {
        p.edge_weights[i] = row[i - lo].first;
        p.col_targets[i] = row[i - lo].second;
      }
    }
  }
  return parts;
}

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<char, sizeof(T)> buf;
  std::uint64_t bits;
  if constexpr (sizeof(T) == 8 && std::is_floating_point_v<T>) {
    std::memcpy(&bits, &value, 8);
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  os.write(buf.data(), buf.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<char, sizeof(T)> buf;
  is.read(buf.data(), buf.size());
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
            << (8 * i);
  }
  if constexpr (sizeof(T) == 8 && std::is_floating_point_v<T>) {
    T value;
    std::memcpy(&value, &bits, 8);
    return value;
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

void save_edge_list(const EdgeList& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint64_t>(os, g.num_vertices);
  put_le<std::uint64_t>(os, g.edges.size());
  for (const Edge& e : g.edges) {
    put_le<std::uint32_t>(os, e.u);
    put_le<std::uint32_t>(os, e.v);
    put_le<double>(os, e.w);
  }
  if (!os) throw IoError("write failed: " + path);
}

EdgeList load_edge_list(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("not a GHSF edge-list file: " + path);
  }
  EdgeList g;
  g.num_vertices = get_le<std::uint64_t>(is);
  const std::uint64_t e_count = get_le<std::uint64_t>(is);
  g.edges.resize(e_count);
  for (std::uint64_t i = 0; i < e_count; ++i) {
    g.edges[i].u = get_le<std::uint32_t>(is);
    g.edges[i].v = get_le<std::uint32_t>(is);
    g.edges[i].w = get_le<double>(is);
  }
  if (!is) throw IoError("truncated edge-list file: " + path);
  return g;
}

void save_edge_list_text(const EdgeList& g, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.precision(17);
  for (const Edge& e : g.edges) {
    os << e.u << ' ' << e.v << ' ' << e.w << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

EdgeList load_edge_list_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  EdgeList g;
  VertexId u, v;
  double w;
  while (is >> u >> v >> w) {
    g.edges.push_back(Edge{u, v, w});
    g.num_vertices =
        std::max<std::uint64_t>(g.num_vertices, std::max(u, v) + 1ull);
  }
  if (!is.eof()) throw IoError("malformed edge line in: " + path);
  return g;
}

}  // namespace ghsf
