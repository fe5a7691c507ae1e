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
#include "ghsf/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <exception>
#include <span>

#include "ghsf/oracle.hpp"

namespace ghsf {

void EngineConfig::validate() const {
  if (sending_frequency == 0 || check_frequency == 0 ||
      quiescence_interval == 0) {
    throw ParameterError("frequencies must be >= 1");
  }
  if (num_workers < 1) throw ParameterError("num_workers must be >= 1");
  if (max_msg_size < kLongWideBits / 8) {
    throw ParameterError("max_msg_size cannot hold one maximal message");
  }
}

namespace {

struct Setup {
  std::vector<LocalGraph> parts;
  bool compressed = false;
  bool fallback = false;
};

// Compressed encoding needs distinct local weights on every worker and
// a rank that fits 8 bits; otherwise the run uses the wide layout.
Setup prepare(const EdgeList& g, const EngineConfig& cfg) {
  cfg.validate();
  Setup s;
  s.parts = partition_block(preprocess(g), cfg.num_workers);
  if (cfg.compressed == CompressedMode::Off) return s;
  bool can = cfg.num_workers <= 256;
  for (const LocalGraph& p : s.parts) {
    can = can && verify_local_uniqueness(p);
  }
  s.compressed = can;
  s.fallback = !can;
  return s;
}

RunReport build_report(const std::vector<std::unique_ptr<Worker>>& workers,
                       std::uint64_t num_vertices, bool compressed,
                       bool fallback, int rounds, double elapsed) {
  RunReport r;
  std::vector<std::vector<Edge>> branches;
  branches.reserve(workers.size());
  for (const auto& w : workers) branches.push_back(w->branch_edges());
  r.forest = collect_forest(branches, num_vertices);
  for (const Edge& e : r.forest.edges) r.forest_weight += e.w;
  r.compressed_used = compressed;
  r.compressed_fallback = fallback;
  for (const auto& w : workers) {
    for (int k = 0; k < kMsgKindCount; ++k) {
      r.sent_by_kind[k] += w->sent_by_kind()[k];
    }
    r.total_messages += w->messages_sent();
    r.iterations = std::max(r.iterations, w->iteration());
    r.trace_hash ^= w->trace_hash();
    const auto& fs = w->flushes();
    r.flushes.insert(r.flushes.end(), fs.begin(), fs.end());
  }
  r.quiescence_rounds = rounds;
  r.elapsed_seconds = elapsed;
  return r;
}

}  // namespace

// ---- Worker ----------------------------------------------------------------

Worker::Worker(LocalGraph g, const EngineConfig& cfg, bool compressed,
               Transport& net, std::function<double()> clock)
    : g_(std::move(g)),
      compressed_(compressed),
      accept_branch_immediate_(cfg.accept_branch_immediate),
      sending_frequency_(cfg.sending_frequency),
      check_frequency_(cfg.check_frequency),
      quiescence_interval_(cfg.quiescence_interval),
      net_(&net),
      clock_(std::move(clock)),
      trace_hash_(14695981039346656037ull) {
  const std::uint64_t m = g_.local_edge_count();
  std::uint64_t table = cfg.hash_table_size;
  if (table == 0 && cfg.hash_table_factor > 0.0) {
    table = std::max<std::uint64_t>(
        static_cast<std::uint64_t>(cfg.hash_table_factor * double(m)), m + 1);
  }
  if (table == 0) table = default_table_size(m);
  index_ = EdgeIndexTable::build(g_, table);
  entry_weight_.resize(m);
  entry_row_.resize(m);
  for (VertexId lv = 0; lv < g_.local_vertex_count(); ++lv) {
    const VertexId row = g_.first_vertex + lv;
    for (std::uint64_t e = g_.row_offsets[lv]; e < g_.row_offsets[lv + 1];
         ++e) {
      entry_row_[e] = row;
      const ExtendedWeight& ew = g_.edge_weights[e];
      entry_weight_[e] =
          compressed_
              ? WireWeight::compressed(compress_weight(
                    ew, {g_.owner_of(row), g_.owner_of(g_.col_targets[e])}))
              : WireWeight::wide(ew);
    }
  }
  vertices_.assign(g_.local_vertex_count(), VertexState{});
  basic_scan_.assign(g_.row_offsets.begin(), g_.row_offsets.end() - 1);
  out_.reserve(g_.num_workers);
  for (WorkerId w = 0; w < g_.num_workers; ++w) {
    out_.emplace_back(w, cfg.max_msg_size, compressed_);
  }
}

std::string Worker::describe(const Message& m) const {
  return std::string(msg_kind_name(m.kind)) + " " + std::to_string(m.src) +
         "->" + std::to_string(m.dst) + " level " + std::to_string(m.level);
}

void Worker::set_branch(EdgeIdx e) {
  if (g_.edge_states[e] != EdgeState::Branch) {
    g_.edge_states[e] = EdgeState::Branch;
    branch_dirty_ = true;
  }
}

bool Worker::take_branch_dirty() {
  const bool d = branch_dirty_;
  branch_dirty_ = false;
  return d;
}

void Worker::send(MsgKind kind, EdgeIdx via, std::uint8_t level,
                  bool find_flag, WireWeight weight) {
  Message m;
  m.kind = kind;
  m.level = level;
  m.find_flag = find_flag;
  m.src = entry_row_[via];
  m.dst = g_.col_targets[via];
  m.weight = weight;
  ++sent_;
  ++sent_by_kind_[static_cast<std::size_t>(kind)];
  const auto mix = [this](std::uint64_t x) {
    trace_hash_ = (trace_hash_ ^ x) * 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(kind));
  mix(m.src);
  mix(m.dst);
  mix(level);
  const WorkerId dst_worker = g_.owner_of(m.dst);
  if (out_[dst_worker].push(m)) flush(dst_worker);
}

void Worker::flush(WorkerId dst) {
  AggregationBuffer& b = out_[dst];
  if (b.empty()) return;
  const auto messages = static_cast<std::uint32_t>(b.message_count());
  Block bytes = b.take();
  flushes_.push_back(FlushSample{rank(), clock_(),
                                 static_cast<std::uint32_t>(bytes.size()),
                                 messages});
  net_->send_block(rank(), dst, std::move(bytes));
}

void Worker::flush_all() {
  for (WorkerId w = 0; w < g_.num_workers; ++w) flush(w);
}

QuiescenceCounters Worker::counters() const {
  bool empty = main_queue_.empty() && test_queue_.empty();
  for (const AggregationBuffer& b : out_) empty = empty && b.empty();
  return QuiescenceCounters{sent_, received_, empty};
}

std::vector<Edge> Worker::branch_edges() const {
  std::vector<Edge> out;
  for (std::uint64_t e = 0; e < g_.local_edge_count(); ++e) {
    if (g_.edge_states[e] == EdgeState::Branch) {
      out.push_back(Edge{entry_row_[e], g_.col_targets[e], g_.edge_weights[e].w});
    }
  }
  return out;
}

Worker::Step Worker::iterate() {
  if (iter_ == 0) wake_all();
  ++iter_;
  for (Block& b : net_->poll_receive(rank())) {
    for (const Message& m : decode_block(b, compressed_)) {
      ++received_;
      (m.kind == MsgKind::Test ? test_queue_ : main_queue_).push_back(m);
    }
  }
  process_pass(main_queue_);
  if (iter_ % check_frequency_ == 0) process_pass(test_queue_);
  if (iter_ % sending_frequency_ == 0) flush_all();
  if (iter_ % quiescence_interval_ == 0) {
    flush_all();
    return Step::WantCheck;
  }
  return Step::Running;
}

void Worker::resume(bool quiescent) {
  if (quiescent) done_ = true;
}

void Worker::process_pass(std::deque<Message>& q) {
  std::size_t n = q.size();
  while (n-- > 0) {
    const Message m = q.front();
    q.pop_front();
    if (!dispatch(m)) q.push_back(m);
  }
}

bool Worker::dispatch(const Message& m) {
  if (!g_.owns(m.dst)) {
    throw ProtocolError("message for foreign vertex: " + describe(m));
  }
  const EdgeIdx e = index_.lookup(m.src, m.dst);
  if (e == kNoEdge) {
    throw ProtocolError("message on non-existent edge: " + describe(m));
  }
  const VertexId lv = g_.to_local(m.dst);
  switch (m.kind) {
    case MsgKind::Connect: return on_connect(lv, m, e);
    case MsgKind::Initiate: on_initiate(lv, m, e); return true;
    case MsgKind::Test: return on_test(lv, m, e);
    case MsgKind::Accept: on_accept(lv, m, e); return true;
    case MsgKind::Reject: on_reject(lv, m, e); return true;
    case MsgKind::Report: return on_report(lv, m, e);
    case MsgKind::ChangeCore: change_core(lv); return true;
  }
  throw ProtocolError("unhandled kind in: " + describe(m));
}

void Worker::wake_all() {
  for (VertexId lv = 0; lv < g_.local_vertex_count(); ++lv) wakeup(lv);
}

void Worker::wakeup(VertexId lv) {
  VertexState& s = vertices_[lv];
  if (s.node_state != NodeState::Sleeping) return;
  s.node_state = NodeState::Found;
  s.fragment_level = 0;
  const std::uint64_t lo = g_.row_offsets[lv];
  if (lo == g_.row_offsets[lv + 1]) return;  // isolated: a complete fragment
  // Rows are weight-sorted, so the first entry is the minimum edge.
  const EdgeIdx e = static_cast<EdgeIdx>(lo);
  set_branch(e);
  send(MsgKind::Connect, e, 0, false, WireWeight{});
}

bool Worker::on_connect(VertexId lv, const Message& m, EdgeIdx e) {
  VertexState& s = vertices_[lv];
  wakeup(lv);
  if (m.level < s.fragment_level) {
    // Absorb the lower-level fragment; it inherits our level and identity.
    set_branch(e);
    send(MsgKind::Initiate, e, s.fragment_level,
         s.node_state == NodeState::Find, s.fragment_identity);
    if (s.node_state == NodeState::Find) ++s.find_count;
    return true;
  }
  if (g_.edge_states[e] == EdgeState::Basic) {
    return false;  // equal or higher level on an unchosen edge: wait
  }
  // Both ends sent Connect over this edge: it becomes the new core.
  if (m.level != s.fragment_level) {
    throw InvariantError("mutual Connect with unequal levels: " + describe(m));
  }
  send(MsgKind::Initiate, e, static_cast<std::uint8_t>(s.fragment_level + 1),
       true, entry_weight_[e]);
  return true;
}

void Worker::on_initiate(VertexId lv, const Message& m, EdgeIdx e) {
  VertexState& s = vertices_[lv];
  if (m.level < s.fragment_level) {
    throw InvariantError("fragment level would decrease: " + describe(m));
  }
  s.fragment_level = m.level;
  s.fragment_identity = m.weight;
  s.node_state = m.find_flag ? NodeState::Find : NodeState::Found;
  s.in_branch = e;
  s.best_edge = kNoEdge;
  s.best_weight = WireWeight::infinite();
  s.best_is_outgoing = false;
  for (std::uint64_t i = g_.row_offsets[lv]; i < g_.row_offsets[lv + 1]; ++i) {
    if (i == e || g_.edge_states[i] != EdgeState::Branch) continue;
    send(MsgKind::Initiate, static_cast<EdgeIdx>(i), m.level, m.find_flag,
         m.weight);
    if (m.find_flag) ++s.find_count;
  }
  if (m.find_flag) start_test(lv);
}

void Worker::start_test(VertexId lv) {
  VertexState& s = vertices_[lv];
  const std::uint64_t hi = g_.row_offsets[lv + 1];
  std::uint64_t& at = basic_scan_[lv];
  // Entries left behind are Branch or Rejected and never Basic again.
  while (at < hi && g_.edge_states[at] != EdgeState::Basic) ++at;
  if (at < hi) {
    const EdgeIdx e = static_cast<EdgeIdx>(at);
    s.test_edge = e;
    send(MsgKind::Test, e, s.fragment_level, false, s.fragment_identity);
  } else {
    s.test_edge = kNoEdge;
    maybe_report(lv);
  }
}

bool Worker::on_test(VertexId lv, const Message& m, EdgeIdx e) {
  VertexState& s = vertices_[lv];
  wakeup(lv);
  if (m.level > s.fragment_level) {
    return false;  // postponed until our level catches up
  }
  if (m.weight != s.fragment_identity) {
    send(MsgKind::Accept, e, s.fragment_level, false, WireWeight{});
    return true;
  }
  // Same fragment: the edge is internal.
  if (g_.edge_states[e] == EdgeState::Basic) {
    g_.edge_states[e] = EdgeState::Rejected;
  }
  if (s.test_edge != e) {
    send(MsgKind::Reject, e, s.fragment_level, false, WireWeight{});
  } else {
    start_test(lv);  // crossing Tests: the peer's Test is our Reject
  }
  return true;
}

void Worker::on_accept(VertexId lv, const Message& m, EdgeIdx e) {
  VertexState& s = vertices_[lv];
  if (s.test_edge != e) {
    throw ProtocolError("Accept on an edge not under test: " + describe(m));
  }
  s.test_edge = kNoEdge;
  if (entry_weight_[e] < s.best_weight) {
    s.best_weight = entry_weight_[e];
    s.best_edge = e;
    s.best_is_outgoing = true;
  }
  if (accept_branch_immediate_) set_branch(e);
  maybe_report(lv);
}

void Worker::on_reject(VertexId lv, const Message& m, EdgeIdx e) {
  VertexState& s = vertices_[lv];
  if (s.test_edge != e) {
    throw ProtocolError("Reject on an edge not under test: " + describe(m));
  }
  if (g_.edge_states[e] == EdgeState::Basic) {
    g_.edge_states[e] = EdgeState::Rejected;
  }
  start_test(lv);
}

void Worker::maybe_report(VertexId lv) {
  VertexState& s = vertices_[lv];
  if (s.find_count != 0 || s.test_edge != kNoEdge) return;
  if (s.in_branch == kNoEdge) {
    throw ProtocolError("report with no in-branch at vertex " +
                        std::to_string(g_.first_vertex + lv));
  }
  s.node_state = NodeState::Found;
  send(MsgKind::Report, s.in_branch, s.fragment_level, false, s.best_weight);
}

bool Worker::on_report(VertexId lv, const Message& m, EdgeIdx e) {
  VertexState& s = vertices_[lv];
  if (e != s.in_branch) {
    if (s.find_count == 0) {
      throw ProtocolError("unexpected subtree Report: " + describe(m));
    }
    --s.find_count;
    if (m.weight < s.best_weight) {
      s.best_weight = m.weight;
      s.best_edge = e;
      s.best_is_outgoing = false;
    }
    maybe_report(lv);
    return true;
  }
  // Core exchange: wait for our own Report before comparing sides.
  if (s.node_state == NodeState::Find) return false;
  if (m.weight > s.best_weight) {
    change_core(lv);
    return true;
  }
  if (m.weight == s.best_weight && !m.weight.is_infinite()) {
    throw InvariantError("core Reports tie on a finite weight: " + describe(m));
  }
  // Either the peer side owns the minimum and runs change-core, or both
  // sides reported infinity and this fragment is complete.
  return true;
}

void Worker::change_core(VertexId lv) {
  VertexState& s = vertices_[lv];
  if (s.best_edge == kNoEdge) {
    throw ProtocolError("change-core with no best edge at vertex " +
                        std::to_string(g_.first_vertex + lv));
  }
  // With immediate accept-branching the edge state no longer separates
  // subtree pointers from the outgoing edge, so route on the bookkeeping
  // bit instead.
  const bool forward = accept_branch_immediate_
                           ? !s.best_is_outgoing
                           : g_.edge_states[s.best_edge] == EdgeState::Branch;
  if (forward) {
    send(MsgKind::ChangeCore, s.best_edge, s.fragment_level, false,
         WireWeight{});
  } else {
    set_branch(s.best_edge);
    send(MsgKind::Connect, s.best_edge, s.fragment_level, false, WireWeight{});
  }
}

// ---- deterministic runner ---------------------------------------------------

DeterministicRunner::DeterministicRunner(const EdgeList& g,
                                         const EngineConfig& cfg)
    : cfg_(cfg),
      num_vertices_(g.num_vertices),
      sched_rng_(cfg.seed),
      started_at_(std::chrono::steady_clock::now()) {
  Setup s = prepare(g, cfg);
  compressed_ = s.compressed;
  fallback_ = s.fallback;
  net_ = std::make_unique<DeterministicTransport>(cfg.num_workers, cfg.seed + 1,
                                                  cfg.max_delivery_latency);
  const auto clock = [p = net_.get()]() {
    return static_cast<double>(p->current_step());
  };
  workers_.reserve(s.parts.size());
  for (LocalGraph& part : s.parts) {
    workers_.push_back(std::make_unique<Worker>(std::move(part), cfg,
                                                compressed_, *net_, clock));
  }
  blocked_.assign(workers_.size(), 0);
}

bool DeterministicRunner::step() {
  if (finished_) return false;
  runnable_.clear();
  for (WorkerId w = 0; w < worker_count(); ++w) {
    if (!blocked_[w]) runnable_.push_back(w);
  }
  if (runnable_.empty()) {
    collective_check();
    return !finished_;
  }
  const WorkerId w = runnable_[sched_rng_() % runnable_.size()];
  net_->advance();
  if (workers_[w]->iterate() == Worker::Step::WantCheck) blocked_[w] = 1;
  if (cfg_.validate_invariants && workers_[w]->take_branch_dirty()) {
    assert_branch_acyclic();
  }
  return true;
}

void DeterministicRunner::run() {
  while (step()) {
  }
}

void DeterministicRunner::collective_check() {
  std::vector<QuiescenceCounters> cs(workers_.size());
  std::uint64_t sent = 0, received = 0;
  bool empty = true;
  for (std::size_t i = 0; i < workers_.size(); ++i) {
    cs[i] = workers_[i]->counters();
    sent += cs[i].sent;
    received += cs[i].received;
    empty = empty && cs[i].queues_empty;
  }
  if (net_->undelivered_blocks() == 0 && empty && sent == received) {
    seen_silence_ = true;
  }
  if (seen_silence_) ++rounds_after_silence_;
  const bool verdict = detector_.round(cs);
  if (verdict) {
    // Ground truth must agree with the counter arithmetic.
    if (net_->undelivered_blocks() != 0) {
      throw InvariantError("completion verdict while blocks are in flight");
    }
    for (const auto& w : workers_) {
      if (w->queued_messages() != 0) {
        throw InvariantError("completion verdict with queued messages");
      }
    }
    finished_ = true;
  }
  for (std::size_t i = 0; i < workers_.size(); ++i) {
    workers_[i]->resume(verdict);
    blocked_[i] = 0;
  }
}

void DeterministicRunner::assert_branch_acyclic() const {
  std::vector<std::vector<Edge>> branches;
  branches.reserve(workers_.size());
  for (const auto& w : workers_) branches.push_back(w->branch_edges());
  collect_forest(branches, num_vertices_);  // throws on a cycle
}

RunReport DeterministicRunner::report() const {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    started_at_)
          .count();
  return build_report(workers_, num_vertices_, compressed_, fallback_,
                      detector_.rounds_run(), elapsed);
}

RunReport run_deterministic(const EdgeList& g, const EngineConfig& cfg) {
  DeterministicRunner r(g, cfg);
  r.run();
  return r.report();
}

// ---- threaded runner --------------------------------------------------------

RunReport run_threaded(const EdgeList& g, const EngineConfig& cfg) {
  Setup s = prepare(g, cfg);
  const WorkerId w_count = cfg.num_workers;
  ThreadedTransport net(w_count);
  const auto start = std::chrono::steady_clock::now();
  const auto clock = [start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  std::vector<std::unique_ptr<Worker>> workers;
  workers.reserve(s.parts.size());
  for (LocalGraph& part : s.parts) {
    workers.push_back(
        std::make_unique<Worker>(std::move(part), cfg, s.compressed, net, clock));
  }

  QuiescenceDetector detector;
  std::vector<QuiescenceCounters> counters(w_count);
  std::vector<std::exception_ptr> errors(w_count);
  std::atomic<bool> failed{false};
  std::atomic<bool> quiescent{false};
  // The completion function runs on exactly one thread per phase; a
  // failed worker forces a unanimous shutdown verdict.
  std::barrier sync(w_count, [&]() noexcept {
    quiescent.store(
        failed.load(std::memory_order_relaxed) ||
            detector.round(std::span<const QuiescenceCounters>(counters)),
        std::memory_order_relaxed);
  });

  bool thread_count_ok = true;
  omp_set_dynamic(0);
#pragma omp parallel num_threads(w_count) default(shared)
  {
#pragma omp single
    {
      if (omp_get_num_threads() != w_count) thread_count_ok = false;
    }
    // implied barrier: all threads agree before touching sync
    if (thread_count_ok) {
      const int me = omp_get_thread_num();
      Worker& wk = *workers[me];
      try {
        while (!wk.done()) {
          if (wk.iterate() == Worker::Step::WantCheck) {
            counters[me] = wk.counters();
            sync.arrive_and_wait();
            wk.resume(quiescent.load(std::memory_order_relaxed));
          }
        }
      } catch (...) {
        errors[me] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        // Keep pace with the others' collective rounds until the
        // shutdown verdict releases everyone.
        do {
          sync.arrive_and_wait();
        } while (!quiescent.load(std::memory_order_relaxed));
      }
    }
  }
  if (!thread_count_ok) {
    throw ParameterError("OpenMP provided fewer threads than workers");
  }
  for (std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return build_report(workers, g.num_vertices, s.compressed, s.fallback,
                      detector.rounds_run(), clock());
}

// ---- forest collection & stats ----------------------------------------------

EdgeList collect_forest(const std::vector<std::vector<Edge>>& per_worker,
                        std::uint64_t num_vertices) {
  std::vector<Edge> all;
  for (const auto& part : per_worker) {
    for (Edge e : part) {
      if (e.u > e.v) std::swap(e.u, e.v);
      all.push_back(e);
    }
  }
  std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Edge& a, const Edge& b) {
                          return a.u == b.u && a.v == b.v;
                        }),
            all.end());
  DisjointSet dsu(num_vertices);
  for (const Edge& e : all) {
    if (!dsu.unite(e.u, e.v)) {
      throw InvariantError("Branch edges contain a cycle through (" +
                           std::to_string(e.u) + ", " + std::to_string(e.v) +
                           ")");
    }
  }
  EdgeList f;
  f.num_vertices = num_vertices;
  f.edges = std::move(all);
  return f;
}

std::vector<IntervalStat> bucket_flushes(
    const std::vector<FlushSample>& samples, int intervals) {
  if (intervals < 1) throw ParameterError("intervals must be >= 1");
  std::vector<IntervalStat> out(intervals);
  std::vector<double> byte_sums(intervals, 0.0);
  for (int i = 0; i < intervals; ++i) out[i].index = i;
  if (samples.empty()) return out;
  double t_max = 0.0;
  for (const FlushSample& s : samples) t_max = std::max(t_max, s.t);
  const double width = t_max / intervals;
  for (const FlushSample& s : samples) {
    const int idx =
        width > 0.0
            ? std::min(static_cast<int>(s.t / width), intervals - 1)
            : 0;
    out[idx].blocks += 1;
    out[idx].messages += s.messages;
    byte_sums[idx] += s.bytes;
  }
  for (int i = 0; i < intervals; ++i) {
    if (out[i].blocks > 0) out[i].avg_bytes = byte_sums[i] / out[i].blocks;
  }
  return out;
}

}  // namespace ghsf
