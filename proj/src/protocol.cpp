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
#include "ghsf/protocol.hpp"

#include <bit>
#include <string>

namespace ghsf {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::Connect: return "Connect";
    case MsgKind::Initiate: return "Initiate";
    case MsgKind::Test: return "Test";
    case MsgKind::Accept: return "Accept";
    case MsgKind::Reject: return "Reject";
    case MsgKind::Report: return "Report";
    case MsgKind::ChangeCore: return "ChangeCore";
  }
  return "?";
}

void BitWriter::put(std::uint64_t value, unsigned bits) {
  for (unsigned i = 0; i < bits; ++i) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if ((value >> i) & 1u) {
      bytes_[bits_ / 8] |= static_cast<std::uint8_t>(1u << (bits_ % 8));
    }
    ++bits_;
  }
}

std::vector<std::uint8_t> BitWriter::take() {
  bits_ = 0;
  return std::move(bytes_);
}

std::uint64_t BitReader::get(unsigned bits) {
  if (bits_left() < bits) {
    throw ProtocolError("truncated message: wanted " + std::to_string(bits) +
                        " bits, have " + std::to_string(bits_left()));
  }
  std::uint64_t value = 0;
  for (unsigned i = 0; i < bits; ++i, ++pos_) {
    if ((bytes_[pos_ / 8] >> (pos_ % 8)) & 1u) {
      value |= std::uint64_t(1) << i;
    }
  }
  return value;
}

void encode(const Message& m, bool compressed, BitWriter& out) {
  if (m.level > 31) {
    throw ProtocolError("fragment level " + std::to_string(m.level) +
                        " does not fit the 5-bit field");
  }
  const std::uint64_t header = static_cast<std::uint64_t>(m.kind) |
                               (std::uint64_t(m.level) << 3) |
                               (std::uint64_t(m.find_flag ? 1 : 0) << 8);
  out.put(header, 16);
  out.put(m.src, 32);
  out.put(m.dst, 32);
  if (is_long_kind(m.kind)) {
    out.put(std::bit_cast<std::uint64_t>(m.weight.w), 64);
    if (compressed) {
      const std::uint64_t rank =
          m.weight.is_infinite() ? 0xffull : m.weight.tie;
      if (rank > 0xff) {
        // Mode negotiation caps compressed runs at 256 workers, so a
        // wider rank here is an engine bug.
        throw ProtocolError("tie rank " + std::to_string(rank) +
                            " does not fit compressed encoding");
      }
      out.put(rank, 8);
    } else {
      out.put(m.weight.tie, 64);
    }
  }
}

Message decode(BitReader& in, bool compressed) {
  const std::uint64_t header = in.get(16);
  const std::uint64_t kind_code = header & 0x7;
  if (kind_code >= kMsgKindCount) {
    throw ProtocolError("unknown message kind code " +
                        std::to_string(kind_code));
  }
  Message m;
  m.kind = static_cast<MsgKind>(kind_code);
  m.level = static_cast<std::uint8_t>((header >> 3) & 0x1f);
  m.find_flag = ((header >> 8) & 1u) != 0;
  // Bits 9-15 are padding; their contents are ignored.
  m.src = static_cast<VertexId>(in.get(32));
  m.dst = static_cast<VertexId>(in.get(32));
  if (is_long_kind(m.kind)) {
    m.weight.w = std::bit_cast<double>(in.get(64));
    const std::uint64_t tie = in.get(compressed ? 8 : 64);
    m.weight.tie = m.weight.is_infinite() ? ~0ull : tie;
  }
  return m;
}

Message decode_single(std::span<const std::uint8_t> bytes, bool compressed) {
  BitReader in(bytes);
  const Message m = decode(in, compressed);
  if (in.bits_left() != 0) {
    throw ProtocolError("message length mismatch: " +
                        std::to_string(bytes.size() * 8) + " bits for kind " +
                        msg_kind_name(m.kind));
  }
  return m;
}

std::vector<Message> decode_block(std::span<const std::uint8_t> bytes,
                                  bool compressed) {
  BitReader in(bytes);
  std::vector<Message> ms;
  while (in.bits_left() > 0) {
    ms.push_back(decode(in, compressed));
  }
  return ms;
}

AggregationBuffer::AggregationBuffer(WorkerId dest_worker,
                                     std::size_t max_msg_size, bool compressed)
    : dest_(dest_worker), max_msg_size_(max_msg_size), compressed_(compressed) {
  const std::size_t maximal = kLongWideBits / 8;
  if (max_msg_size_ < maximal) {
    throw ParameterError("max_msg_size must be at least " +
                         std::to_string(maximal) + " bytes");
  }
}

bool AggregationBuffer::push(const Message& m) {
  encode(m, compressed_, writer_);
  ++messages_;
  const std::size_t maximal =
      (compressed_ ? kLongCompressedBits : kLongWideBits) / 8;
  return writer_.bytes().size() + maximal > max_msg_size_;
}

std::vector<std::uint8_t> AggregationBuffer::take() {
  messages_ = 0;
  return writer_.take();
}

}  // namespace ghsf
