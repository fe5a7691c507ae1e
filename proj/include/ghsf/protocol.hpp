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
#ifndef GHSF_PROTOCOL_HPP
#define GHSF_PROTOCOL_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ghsf/types.hpp"
#include "ghsf/weights.hpp"

namespace ghsf {

enum class MsgKind : std::uint8_t {
  Connect = 0,
  Initiate = 1,
  Test = 2,
  Accept = 3,
  Reject = 4,
  Report = 5,
  ChangeCore = 6,
};
inline constexpr int kMsgKindCount = 7;

// Connect, Accept, Reject and ChangeCore carry no weight.
constexpr bool is_long_kind(MsgKind k) {
  return k == MsgKind::Initiate || k == MsgKind::Test || k == MsgKind::Report;
}

const char* msg_kind_name(MsgKind k);

// Weight as carried inside a message. `tie` is the 64-bit special_id
// (tie_lo || tie_hi) in wide mode and the minimal owning worker rank in
// compressed mode; either way comparison is lexicographic on (w, tie).
struct WireWeight {
  double w = 0.0;
  std::uint64_t tie = 0;

  static constexpr WireWeight infinite() {
    return WireWeight{std::numeric_limits<double>::infinity(), ~0ull};
  }
  constexpr bool is_infinite() const {
    return w == std::numeric_limits<double>::infinity();
  }

  static constexpr WireWeight wide(const ExtendedWeight& ew) {
    return WireWeight{ew.w, ew.special_id()};
  }
  static constexpr WireWeight compressed(const CompressedWeight& cw) {
    return WireWeight{cw.w, cw.tie_rank};
  }

  friend constexpr bool operator==(const WireWeight&,
                                   const WireWeight&) = default;
  friend constexpr bool operator<(const WireWeight& a, const WireWeight& b) {
    if (a.w != b.w) return a.w < b.w;
    return a.tie < b.tie;
  }
  friend constexpr bool operator>(const WireWeight& a, const WireWeight& b) {
    return b < a;
  }
};

struct Message {
  MsgKind kind = MsgKind::Connect;
  std::uint8_t level = 0;   // fragment level, 0..31
  bool find_flag = false;   // vertex state bit carried by Initiate
  VertexId src = 0;
  VertexId dst = 0;
  WireWeight weight{};      // long kinds only

  friend constexpr bool operator==(const Message&, const Message&) = default;
};

// Wire sizes. Every message is a whole number of bytes, so a flushed
// block is messages packed back to back with no padding between them.
inline constexpr std::size_t kShortBits = 80;
inline constexpr std::size_t kLongCompressedBits = 152;
inline constexpr std::size_t kLongWideBits = 208;

constexpr std::size_t encoded_bits(MsgKind k, bool compressed) {
  if (!is_long_kind(k)) return kShortBits;
  return compressed ? kLongCompressedBits : kLongWideBits;
}

// Little-endian bit packing: bit i of the stream is bit (i % 8) of byte
// (i / 8). Fields are appended least-significant-bit first.
class BitWriter {
 public:
  void put(std::uint64_t value, unsigned bits);
  std::size_t bit_count() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take();

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint64_t get(unsigned bits);
  std::size_t bits_left() const { return bytes_.size() * 8 - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Layout: 16-bit header (bits 0-2 kind, 3-7 level, 8 state flag, 9-15
// zero), 32-bit src, 32-bit dst; long kinds append the 64-bit weight and
// then the tie as 8 bits (compressed) or 64 bits (wide). An infinite
// Report weight is the +inf double pattern with all tie bits set.
void encode(const Message& m, bool compressed, BitWriter& out);

// Streaming inverse of encode; header padding bits are ignored. Throws
// ProtocolError on a kind code above 6 or a truncated payload.
Message decode(BitReader& in, bool compressed);

// Whole-buffer decode of a single message with an exact length check.
Message decode_single(std::span<const std::uint8_t> bytes, bool compressed);

// All messages in a flushed block, in push order.
std::vector<Message> decode_block(std::span<const std::uint8_t> bytes,
                                  bool compressed);

// Per-destination staging buffer. push() reports when the buffer cannot
// be guaranteed to take one more maximal message, at which point the
// owner must flush; flushed blocks therefore never exceed max_msg_size.
class AggregationBuffer {
 public:
  AggregationBuffer(WorkerId dest_worker, std::size_t max_msg_size,
                    bool compressed);

  // True when adding one more maximal message would exceed max_msg_size.
  bool push(const Message& m);

  bool empty() const { return writer_.bit_count() == 0; }
  std::size_t byte_count() const { return writer_.bytes().size(); }
  std::size_t message_count() const { return messages_; }
  WorkerId dest_worker() const { return dest_; }

  // Hands the packed block over and resets the buffer.
  std::vector<std::uint8_t> take();

 private:
  WorkerId dest_;
  std::size_t max_msg_size_;
  bool compressed_;
  std::size_t messages_ = 0;
  BitWriter writer_;
};

}  // namespace ghsf

#endif  // GHSF_PROTOCOL_HPP
