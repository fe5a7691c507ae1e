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
#ifndef GHSF_TRANSPORT_HPP
#define GHSF_TRANSPORT_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <vector>

#include "ghsf/types.hpp"

namespace ghsf {

using Block = std::vector<std::uint8_t>;

// Exactly-once block delivery with FIFO order per (src, dst) pair. The
// aggregation buffers are FIFO as well, which together gives the
// per-edge message order GHS requires.
class Transport {
 public:
  virtual ~Transport() = default;

  // Throws ParameterError if src or dst is out of range. Self-sends are
  // delivered to the sender's own inbox.
  virtual void send_block(WorkerId src, WorkerId dst, Block block) = 0;

  // Non-blocking: everything currently deliverable for `me`, consumed.
  virtual std::vector<Block> poll_receive(WorkerId me) = 0;

  virtual WorkerId worker_count() const = 0;
};

// Single-threaded transport for the simulated cluster. Each block gets a
// seeded delivery delay measured in scheduler steps (clamped so a later
// block never overtakes an earlier one on the same channel), which lets
// tests drive adversarial interleavings reproducibly.
class DeterministicTransport final : public Transport {
 public:
  DeterministicTransport(WorkerId workers, std::uint64_t seed,
                         std::uint32_t max_latency = 0);

  void send_block(WorkerId src, WorkerId dst, Block block) override;
  std::vector<Block> poll_receive(WorkerId me) override;
  WorkerId worker_count() const override { return workers_; }

  void advance(std::uint64_t steps = 1) { step_ += steps; }
  std::uint64_t current_step() const { return step_; }

  // Blocks sent but not yet polled, over all channels.
  std::uint64_t undelivered_blocks() const;

 private:
  struct InFlight {
    std::uint64_t deliver_at;
    Block bytes;
  };

  std::size_t channel(WorkerId src, WorkerId dst) const {
    return static_cast<std::size_t>(src) * workers_ + dst;
  }
  void check_rank(WorkerId w, const char* what) const;

  WorkerId workers_;
  std::uint32_t max_latency_;
  std::uint64_t step_ = 0;
  std::mt19937_64 rng_;
  std::vector<std::deque<InFlight>> channels_;
  std::vector<std::uint64_t> last_assigned_;  // FIFO floor per channel
};

// One mutex-guarded queue per channel; single producer and single
// consumer each, so contention is only pairwise.
class ThreadedTransport final : public Transport {
 public:
  explicit ThreadedTransport(WorkerId workers);

  void send_block(WorkerId src, WorkerId dst, Block block) override;
  std::vector<Block> poll_receive(WorkerId me) override;
  WorkerId worker_count() const override { return workers_; }

 private:
  struct Channel {
    std::mutex mu;
    std::deque<Block> blocks;
  };

  void check_rank(WorkerId w, const char* what) const;

  WorkerId workers_;
  std::vector<std::unique_ptr<Channel>> channels_;
};

struct QuiescenceCounters {
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  bool queues_empty = true;
};

// Double-round silence test. A round is quiescent when the global sent
// and received sums match and every queue is empty; the verdict is true
// only when two consecutive rounds are quiescent with identical sums. A
// single-round emptiness test could race with a block in flight between
// two workers that already posted their counters.
class QuiescenceDetector {
 public:
  // Collective: must be invoked with counters from all workers at a
  // common synchronization point.
  bool round(std::span<const QuiescenceCounters> all);

  int rounds_run() const { return rounds_; }

 private:
  int rounds_ = 0;
  bool prev_ok_ = false;
  std::uint64_t prev_sent_ = 0;
  std::uint64_t prev_received_ = 0;
};

}  // namespace ghsf

#endif  // GHSF_TRANSPORT_HPP
