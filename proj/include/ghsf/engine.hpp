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
#ifndef GHSF_ENGINE_HPP
#define GHSF_ENGINE_HPP

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ghsf/edge_index.hpp"
#include "ghsf/graph.hpp"
#include "ghsf/protocol.hpp"
#include "ghsf/transport.hpp"
#include "ghsf/types.hpp"

namespace ghsf {

enum class NodeState : std::uint8_t { Sleeping, Find, Found };

struct VertexState {
  NodeState node_state = NodeState::Sleeping;
  std::uint8_t fragment_level = 0;
  WireWeight fragment_identity{};  // core edge weight; meaningless at level 0
  EdgeIdx best_edge = kNoEdge;
  WireWeight best_weight = WireWeight::infinite();
  bool best_is_outgoing = false;  // best came from own Accept, not a subtree
  EdgeIdx test_edge = kNoEdge;
  EdgeIdx in_branch = kNoEdge;    // edge toward the core
  std::uint32_t find_count = 0;   // pending subtree Reports
};

enum class CompressedMode : std::uint8_t { Auto, On, Off };

struct EngineConfig {
  std::size_t max_msg_size = 10000;          // aggregated block limit, bytes
  std::uint32_t sending_frequency = 5;       // flush every N loop iterations
  std::uint32_t check_frequency = 5;         // Test-queue pass every N iterations
  std::uint32_t quiescence_interval = 100000;  // completion check every N iterations
  std::uint64_t hash_table_size = 0;         // 0 = local_actual_m * 5 * 11 / 13
  double hash_table_factor = 0.0;            // >0: size = factor * local edges
  WorkerId num_workers = 1;
  std::uint64_t seed = 0;                    // deterministic scheduler seed
  CompressedMode compressed = CompressedMode::Auto;

  // Mark the tested edge Branch as soon as its Accept arrives, instead of
  // at change-core time. Off by default; see README for why this variant
  // can emit edges the forest must not contain.
  bool accept_branch_immediate = false;

  // Deterministic transport only: upper bound on per-block delivery delay
  // in scheduler steps. Zero delivers as soon as the receiver polls.
  std::uint32_t max_delivery_latency = 0;

  // Re-check that Branch edges stay acyclic after every transition
  // (deterministic runner only; slow, meant for the test suite).
  bool validate_invariants = false;

  void validate() const;  // throws ParameterError
};

struct FlushSample {
  WorkerId worker = 0;
  double t = 0.0;  // scheduler step (deterministic) or seconds (threaded)
  std::uint32_t bytes = 0;
  std::uint32_t messages = 0;
};

struct RunReport {
  EdgeList forest;
  double forest_weight = 0.0;
  bool compressed_used = false;
  bool compressed_fallback = false;  // compression requested but refused
  std::uint64_t total_messages = 0;
  std::array<std::uint64_t, kMsgKindCount> sent_by_kind{};
  std::uint64_t iterations = 0;  // loop iterations per worker
  int quiescence_rounds = 0;
  std::uint64_t trace_hash = 0;  // fingerprint of every send, in order
  double elapsed_seconds = 0.0;
  std::vector<FlushSample> flushes;
};

// One worker of the simulated cluster: the vertex automata for its block,
// the deferred-message queues, per-destination aggregation buffers and
// the receive/dispatch loop. All state is owned exclusively by the
// worker; the transport and the collective quiescence check are the only
// cross-worker touch points.
class Worker {
 public:
  enum class Step : std::uint8_t { Running, WantCheck };

  Worker(LocalGraph g, const EngineConfig& cfg, bool compressed,
         Transport& net, std::function<double()> clock);

  // One main-loop iteration: poll + dispatch, queue passes, buffer
  // flushes. Returns WantCheck when it is time for the collective
  // completion check (buffers are flushed first).
  Step iterate();

  // Outcome of the collective check this worker blocked on.
  void resume(bool quiescent);
  bool done() const { return done_; }

  QuiescenceCounters counters() const;

  const LocalGraph& local() const { return g_; }
  WorkerId rank() const { return g_.worker_rank; }
  const VertexState& vertex(VertexId global) const {
    return vertices_[g_.to_local(global)];
  }
  std::vector<Edge> branch_edges() const;
  const std::array<std::uint64_t, kMsgKindCount>& sent_by_kind() const {
    return sent_by_kind_;
  }
  std::uint64_t messages_sent() const { return sent_; }
  std::uint64_t messages_received() const { return received_; }
  std::uint64_t iteration() const { return iter_; }
  std::uint64_t trace_hash() const { return trace_hash_; }
  const std::vector<FlushSample>& flushes() const { return flushes_; }
  std::size_t queued_messages() const {
    return main_queue_.size() + test_queue_.size();
  }

  // True once since the last call if any edge turned Branch.
  bool take_branch_dirty();

 private:
  void wake_all();
  void wakeup(VertexId lv);
  bool dispatch(const Message& m);  // false: precondition not met, re-queue
  bool on_connect(VertexId lv, const Message& m, EdgeIdx e);
  void on_initiate(VertexId lv, const Message& m, EdgeIdx e);
  bool on_test(VertexId lv, const Message& m, EdgeIdx e);
  void on_accept(VertexId lv, const Message& m, EdgeIdx e);
  void on_reject(VertexId lv, const Message& m, EdgeIdx e);
  bool on_report(VertexId lv, const Message& m, EdgeIdx e);
  void start_test(VertexId lv);
  void maybe_report(VertexId lv);
  void change_core(VertexId lv);

  void process_pass(std::deque<Message>& q);
  void send(MsgKind kind, EdgeIdx via, std::uint8_t level, bool find_flag,
            WireWeight weight);
  void flush(WorkerId dst);
  void flush_all();
  void set_branch(EdgeIdx e);
  std::string describe(const Message& m) const;

  LocalGraph g_;
  bool compressed_;
  bool accept_branch_immediate_;
  std::uint32_t sending_frequency_;
  std::uint32_t check_frequency_;
  std::uint32_t quiescence_interval_;
  Transport* net_;
  std::function<double()> clock_;

  EdgeIndexTable index_;
  std::vector<WireWeight> entry_weight_;  // per entry, in the active mode
  std::vector<VertexId> entry_row_;       // per entry, global row vertex
  std::vector<VertexState> vertices_;
  std::vector<std::uint64_t> basic_scan_;  // per row: weight-sorted scan hint
  std::deque<Message> main_queue_;
  std::deque<Message> test_queue_;
  std::vector<AggregationBuffer> out_;

  std::uint64_t iter_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t received_ = 0;
  std::array<std::uint64_t, kMsgKindCount> sent_by_kind_{};
  std::uint64_t trace_hash_;
  std::vector<FlushSample> flushes_;
  bool branch_dirty_ = false;
  bool done_ = false;
};

// Seeded single-threaded cluster simulation: one scheduler step runs one
// loop iteration of one runnable worker. The collective completion check
// fires once every worker is parked on it, mirroring an Allreduce.
class DeterministicRunner {
 public:
  DeterministicRunner(const EdgeList& g, const EngineConfig& cfg);

  bool step();  // false once the run has completed
  void run();
  RunReport report() const;

  WorkerId worker_count() const { return WorkerId(workers_.size()); }
  Worker& worker(WorkerId w) { return *workers_[w]; }
  DeterministicTransport& transport() { return *net_; }
  bool finished() const { return finished_; }
  // Collective rounds executed after the system first went silent.
  int rounds_after_silence() const { return rounds_after_silence_; }

 private:
  void collective_check();
  void assert_branch_acyclic() const;

  EngineConfig cfg_;
  std::uint64_t num_vertices_;
  bool compressed_ = false;
  bool fallback_ = false;
  std::unique_ptr<DeterministicTransport> net_;
  std::vector<std::unique_ptr<Worker>> workers_;
  std::vector<char> blocked_;
  std::vector<WorkerId> runnable_;
  QuiescenceDetector detector_;
  std::mt19937_64 sched_rng_;
  bool finished_ = false;
  bool seen_silence_ = false;
  int rounds_after_silence_ = 0;
  std::chrono::steady_clock::time_point started_at_;
};

RunReport run_deterministic(const EdgeList& g, const EngineConfig& cfg);

// One OpenMP thread per worker over the in-memory transport; the
// completion check synchronizes on a barrier.
RunReport run_threaded(const EdgeList& g, const EngineConfig& cfg);

// Union of per-worker Branch edges with cross-worker duplicates merged.
// Throws InvariantError if the edges contain a cycle.
EdgeList collect_forest(const std::vector<std::vector<Edge>>& per_worker,
                        std::uint64_t num_vertices);

struct IntervalStat {
  int index = 0;
  double avg_bytes = 0.0;  // mean flushed-block size in the interval
  std::uint64_t messages = 0;
  std::uint64_t blocks = 0;
};

// Buckets flush samples into `intervals` equal slices of the run time.
std::vector<IntervalStat> bucket_flushes(const std::vector<FlushSample>& samples,
                                         int intervals);

}  // namespace ghsf

#endif  // GHSF_ENGINE_HPP
