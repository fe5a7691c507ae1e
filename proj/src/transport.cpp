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
#include "ghsf/transport.hpp"

#include <algorithm>
#include <string>

namespace ghsf {

DeterministicTransport::DeterministicTransport(WorkerId workers,
                                               std::uint64_t seed,
                                               std::uint32_t max_latency)
    : workers_(workers),
      max_latency_(max_latency),
      rng_(seed ^ 0x9e3779b97f4a7c15ull),
      channels_(static_cast<std::size_t>(workers) * workers),
      last_assigned_(channels_.size(), 0) {
  if (workers < 1) throw ParameterError("transport needs at least one worker");
}

void DeterministicTransport::check_rank(WorkerId w, const char* what) const {
  if (w < 0 || w >= workers_) {
    throw ParameterError(std::string(what) + " rank " + std::to_string(w) +
                         " out of range [0, " + std::to_string(workers_) + ")");
  }
}

void DeterministicTransport::send_block(WorkerId src, WorkerId dst,
                                        Block block) {
  check_rank(src, "source");
  check_rank(dst, "destination");
  const std::size_t ch = channel(src, dst);
  const std::uint64_t lat = max_latency_ ? rng_() % (max_latency_ + 1ull) : 0;
  const std::uint64_t at = std::max(step_ + lat, last_assigned_[ch]);
  last_assigned_[ch] = at;
  channels_[ch].push_back(InFlight{at, std::move(block)});
}

std::vector<Block> DeterministicTransport::poll_receive(WorkerId me) {
  check_rank(me, "receiver");
  std::vector<Block> out;
  for (WorkerId src = 0; src < workers_; ++src) {
    auto& q = channels_[channel(src, me)];
    while (!q.empty() && q.front().deliver_at <= step_) {
      out.push_back(std::move(q.front().bytes));
      q.pop_front();
    }
  }
  return out;
}

std::uint64_t DeterministicTransport::undelivered_blocks() const {
  std::uint64_t n = 0;
  for (const auto& q : channels_) n += q.size();
  return n;
}

ThreadedTransport::ThreadedTransport(WorkerId workers) : workers_(workers) {
  if (workers < 1) throw ParameterError("transport needs at least one worker");
  channels_.reserve(static_cast<std::size_t>(workers) * workers);
  for (std::size_t i = 0; i < static_cast<std::size_t>(workers) * workers; ++i) {
    channels_.push_back(std::make_unique<Channel>());
  }
}

void ThreadedTransport::check_rank(WorkerId w, const char* what) const {
  if (w < 0 || w >= workers_) {
    throw ParameterError(std::string(what) + " rank " + std::to_string(w) +
                         " out of range [0, " + std::to_string(workers_) + ")");
  }
}

void ThreadedTransport::send_block(WorkerId src, WorkerId dst, Block block) {
  check_rank(src, "source");
  check_rank(dst, "destination");
  Channel& ch = *channels_[static_cast<std::size_t>(src) * workers_ + dst];
  std::lock_guard<std::mutex> lock(ch.mu);
  ch.blocks.push_back(std::move(block));
}

std::vector<Block> ThreadedTransport::poll_receive(WorkerId me) {
  check_rank(me, "receiver");
  std::vector<Block> out;
  for (WorkerId src = 0; src < workers_; ++src) {
    Channel& ch = *channels_[static_cast<std::size_t>(src) * workers_ + me];
    std::lock_guard<std::mutex> lock(ch.mu);
    while (!ch.blocks.empty()) {
      out.push_back(std::move(ch.blocks.front()));
      ch.blocks.pop_front();
    }
  }
  return out;
}

bool QuiescenceDetector::round(std::span<const QuiescenceCounters> all) {
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  bool empty = true;
  for (const QuiescenceCounters& c : all) {
    sent += c.sent;
    received += c.received;
    empty = empty && c.queues_empty;
  }
  const bool ok = empty && sent == received;
  const bool verdict =
      ok && prev_ok_ && prev_sent_ == sent && prev_received_ == received;
  prev_ok_ = ok;
  prev_sent_ = sent;
  prev_received_ = received;
  ++rounds_;
  return verdict;
}

}  // namespace ghsf
