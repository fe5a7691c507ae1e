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
#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ghsf/engine.hpp"
#include "ghsf/graph.hpp"
#include "ghsf/oracle.hpp"

namespace {

using namespace ghsf;

EdgeList generate(const std::string& kind, int scale, int avg_degree,
                  std::uint64_t seed) {
  if (kind == "rmat") return generate_rmat(scale, avg_degree, seed);
  if (kind == "ssca2") return generate_ssca2(scale, seed);
  if (kind == "uniform") {
    return generate_uniform_random(scale, avg_degree, seed);
  }
  throw ParameterError("unknown generator kind: " + kind);
}

EdgeList load_graph(const std::string& path, const std::string& format) {
  return format == "text" ? load_edge_list_text(path) : load_edge_list(path);
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("GHSF_SEED")) {
    return std::strtoull(s, nullptr, 10);
  }
  return fallback;
}

CompressedMode parse_compressed(const std::string& s) {
  if (s == "auto") return CompressedMode::Auto;
  if (s == "on") return CompressedMode::On;
  if (s == "off") return CompressedMode::Off;
  throw ParameterError("--compressed must be auto, on or off");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_stats_csv(const std::string& path,
                     const std::vector<FlushSample>& flushes, int intervals) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "interval_index,avg_bytes,msgs_sent\n";
  for (const IntervalStat& s : bucket_flushes(flushes, intervals)) {
    os << s.index << ',' << s.avg_bytes << ',' << s.messages << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

void print_summary(const RunReport& r) {
  std::cout << std::setprecision(17) << "forest_weight=" << r.forest_weight
            << " forest_edges=" << r.forest.edges.size()
            << " messages=" << r.total_messages;
  for (int k = 0; k < kMsgKindCount; ++k) {
    std::cout << ' ' << msg_kind_name(static_cast<MsgKind>(k)) << '='
              << r.sent_by_kind[k];
  }
  std::cout << " iterations=" << r.iterations
            << " rounds=" << r.quiescence_rounds
            << " mode=" << (r.compressed_used ? "compressed" : "wide")
            << " trace=" << std::hex << r.trace_hash << std::dec
            << std::setprecision(4) << " seconds=" << r.elapsed_seconds
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum spanning forest engine over simulated workers"};
  app.require_subcommand(1);

  // gen ----------------------------------------------------------------
  std::string g_kind, g_out, g_format = "bin";
  int g_scale = 10, g_degree = 32;
  std::uint64_t g_seed = 1;
  CLI::App* cgen = app.add_subcommand("gen", "generate an edge-list file");
  cgen->add_option("kind", g_kind, "rmat | ssca2 | uniform")->required();
  cgen->add_option("--scale", g_scale, "log2 of the vertex count")->required();
  cgen->add_option("--seed", g_seed, "generator seed (GHSF_SEED overrides)");
  cgen->add_option("--avg-degree", g_degree,
                   "raw edges per vertex (rmat/uniform)");
  cgen->add_option("--out", g_out, "output path")->required();
  cgen->add_option("--format", g_format, "bin | text");

  // run ----------------------------------------------------------------
  std::string r_graph, r_gen, r_format = "bin", r_transport = "deterministic";
  std::string r_compressed = "auto", r_out, r_stats;
  int r_scale = 10, r_degree = 32, r_intervals = 64;
  EngineConfig r_cfg;
  CLI::App* crun = app.add_subcommand("run", "build the forest of a graph");
  auto* gopt = crun->add_option("--graph", r_graph, "edge-list file");
  auto* kopt =
      crun->add_option("--gen", r_gen, "generate instead: rmat|ssca2|uniform");
  gopt->excludes(kopt);
  crun->add_option("--scale", r_scale, "generator scale");
  crun->add_option("--avg-degree", r_degree, "generator raw degree");
  crun->add_option("--format", r_format, "graph file format: bin | text");
  crun->add_option("--workers", r_cfg.num_workers, "worker count");
  crun->add_option("--transport", r_transport, "deterministic | threaded");
  crun->add_option("--seed", r_cfg.seed,
                   "scheduler & generator seed (GHSF_SEED overrides)");
  crun->add_option("--max-msg-size", r_cfg.max_msg_size,
                   "aggregation block limit in bytes (default 10000)");
  crun->add_option("--sending-frequency", r_cfg.sending_frequency,
                   "flush every N loop iterations (default 5)");
  crun->add_option("--check-frequency", r_cfg.check_frequency,
                   "Test-queue pass every N iterations (default 5)");
  crun->add_option("--quiescence-interval", r_cfg.quiescence_interval,
                   "completion check every N iterations (default 100000)");
  crun->add_option("--hash-table-size", r_cfg.hash_table_size,
                   "edge index slots per worker (0 = m*5*11/13)");
  crun->add_option("--hash-table-factor", r_cfg.hash_table_factor,
                   "edge index slots as factor * local edge count");
  crun->add_option("--compressed", r_compressed, "auto | on | off");
  crun->add_flag("--accept-branch-immediate", r_cfg.accept_branch_immediate,
                 "eager Branch on Accept (unsound in general, see README)");
  crun->add_option("--max-latency", r_cfg.max_delivery_latency,
                   "deterministic transport delivery delay bound");
  crun->add_flag("--validate", r_cfg.validate_invariants,
                 "continuous Branch-acyclicity checking (slow)");
  crun->add_option("--out", r_out, "forest edge-list output path");
  crun->add_option("--stats-out", r_stats,
                   "CSV columns: interval_index,avg_bytes,msgs_sent");
  crun->add_option("--intervals", r_intervals, "stats interval count");

  // verify ---------------------------------------------------------------
  std::string v_forest, v_graph, v_format = "bin";
  CLI::App* cverify =
      app.add_subcommand("verify", "compare a forest against Kruskal");
  cverify->add_option("--forest", v_forest, "forest edge-list file")
      ->required();
  cverify->add_option("--graph", v_graph, "graph edge-list file")->required();
  cverify->add_option("--format", v_format, "graph file format: bin | text");

  // bench ----------------------------------------------------------------
  std::string b_gen = "rmat", b_workers = "1,2,4,8", b_transports = "threaded";
  std::string b_out;
  int b_scale = 16, b_degree = 32, b_intervals = 64;
  std::uint64_t b_seed = 1;
  bool b_baseline = true;
  EngineConfig b_cfg;
  b_cfg.max_msg_size = 20000;  // the message-size study uses larger blocks
  CLI::App* cbench = app.add_subcommand(
      "bench", "time a config matrix; CSV with per-interval message sizes");
  cbench->add_option("--gen", b_gen, "rmat | ssca2 | uniform");
  cbench->add_option("--scale", b_scale, "generator scale");
  cbench->add_option("--avg-degree", b_degree, "generator raw degree");
  cbench->add_option("--seed", b_seed, "seed (GHSF_SEED overrides)");
  cbench->add_option("--workers", b_workers, "comma-separated worker counts");
  cbench->add_option("--transport", b_transports,
                     "comma-separated: deterministic,threaded");
  cbench->add_option("--intervals", b_intervals, "stats interval count");
  cbench->add_option("--max-msg-size", b_cfg.max_msg_size,
                     "aggregation block limit in bytes (default 20000)");
  cbench->add_option("--quiescence-interval", b_cfg.quiescence_interval,
                     "completion check every N iterations");
  cbench->add_flag("--baseline,!--no-baseline", b_baseline,
                   "include a sequential Kruskal row");
  cbench->add_option("--out", b_out, "CSV output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cgen->parsed()) {
      const EdgeList g = preprocess(
          generate(g_kind, g_scale, g_degree, seed_from_env(g_seed)));
      if (g_format == "text") {
        save_edge_list_text(g, g_out);
      } else {
        save_edge_list(g, g_out);
      }
      std::cout << "wrote " << g_out << ": " << g.num_vertices
                << " vertices, " << g.edges.size() << " edges\n";
      return 0;
    }

    if (crun->parsed()) {
      if (r_graph.empty() && r_gen.empty()) {
        std::cerr << "error: one of --graph or --gen is required\n";
        return 2;
      }
      r_cfg.seed = seed_from_env(r_cfg.seed);
      r_cfg.compressed = parse_compressed(r_compressed);
      EdgeList g = r_graph.empty()
                       ? generate(r_gen, r_scale, r_degree, r_cfg.seed)
                       : load_graph(r_graph, r_format);
      g = preprocess(g);
      const RunReport r = r_transport == "threaded"
                              ? run_threaded(g, r_cfg)
                              : run_deterministic(g, r_cfg);
      if (r.compressed_fallback && r_cfg.compressed == CompressedMode::On) {
        std::cerr << "warning: compressed mode unavailable (duplicate local "
                     "weights or >256 workers); using wide encoding\n";
      }
      if (!r_out.empty()) save_edge_list(r.forest, r_out);
      if (!r_stats.empty()) write_stats_csv(r_stats, r.flushes, r_intervals);
      print_summary(r);
      return 0;
    }

    if (cverify->parsed()) {
      const EdgeList forest = load_edge_list(v_forest);
      const EdgeList graph = preprocess(load_graph(v_graph, v_format));
      const MsfResult oracle = kruskal_msf(graph);
      if (forests_equal(forest, oracle.forest)) {
        std::cout << "OK: " << forest.edges.size() << " edges, weight "
                  << std::setprecision(17) << oracle.total_weight << '\n';
        return 0;
      }
      const auto canon = [](const EdgeList& f) {
        std::vector<std::pair<VertexId, VertexId>> ps;
        for (const Edge& e : f.edges) {
          ps.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
        }
        std::sort(ps.begin(), ps.end());
        return ps;
      };
      const auto got = canon(forest);
      const auto want = canon(oracle.forest);
      std::size_t i = 0;
      while (i < got.size() && i < want.size() && got[i] == want[i]) ++i;
      const auto name = [](const std::vector<std::pair<VertexId, VertexId>>& v,
                           std::size_t at) {
        return at < v.size() ? "(" + std::to_string(v[at].first) + "," +
                                   std::to_string(v[at].second) + ")"
                             : std::string("nothing");
      };
      std::cerr << "MISMATCH at position " << i << ": forest has "
                << name(got, i) << ", oracle has " << name(want, i) << '\n';
      return 1;
    }

    if (cbench->parsed()) {
      const EdgeList g = preprocess(
          generate(b_gen, b_scale, b_degree, seed_from_env(b_seed)));
      std::ofstream os(b_out, std::ios::trunc);
      if (!os) throw IoError("cannot open for writing: " + b_out);
      os << "graph,workers,transport,time_s,messages,interval,avg_msg_bytes,"
            "msgs_in_interval\n";
      const std::string label = b_gen + "-" + std::to_string(b_scale);
      if (b_baseline) {
        const auto t0 = std::chrono::steady_clock::now();
        const MsfResult m = kruskal_msf(g);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        os << label << ",1,kruskal," << secs << ",0,-1,0,0\n";
        std::cout << "kruskal: " << m.forest.edges.size() << " edges in "
                  << secs << "s\n";
      }
      for (const std::string& tr : split(b_transports, ',')) {
        for (const std::string& w : split(b_workers, ',')) {
          EngineConfig cfg = b_cfg;
          cfg.num_workers = static_cast<WorkerId>(std::stoi(w));
          cfg.seed = seed_from_env(b_seed);
          const RunReport r = tr == "threaded" ? run_threaded(g, cfg)
                                               : run_deterministic(g, cfg);
          for (const IntervalStat& st : bucket_flushes(r.flushes, b_intervals)) {
            os << label << ',' << w << ',' << tr << ',' << r.elapsed_seconds
               << ',' << r.total_messages << ',' << st.index << ','
               << st.avg_bytes << ',' << st.messages << '\n';
          }
          std::cout << tr << " workers=" << w << ": " << r.elapsed_seconds
                    << "s, " << r.total_messages << " messages\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
