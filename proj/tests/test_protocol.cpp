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

#include <random>

#include "ghsf/protocol.hpp"

using namespace ghsf;

namespace {

Message random_message(std::mt19937_64& rng, bool compressed) {
  Message m;
  m.kind = static_cast<MsgKind>(rng() % kMsgKindCount);
  m.level = static_cast<std::uint8_t>(rng() % 32);
  m.find_flag = (rng() & 1) != 0;
  m.src = static_cast<VertexId>(rng());
  m.dst = static_cast<VertexId>(rng());
  if (is_long_kind(m.kind)) {
    if (rng() % 8 == 0) {
      m.weight = WireWeight::infinite();
    } else {
      m.weight.w = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      m.weight.tie = compressed ? rng() % 256 : rng();
    }
  }
  return m;
}

std::vector<std::uint8_t> encode_one(const Message& m, bool compressed) {
  BitWriter w;
  encode(m, compressed, w);
  return w.take();
}

}  // namespace

TEST_CASE("short messages are exactly 80 bits") {
  for (MsgKind k : {MsgKind::Connect, MsgKind::Accept, MsgKind::Reject,
                    MsgKind::ChangeCore}) {
    Message m;
    m.kind = k;
    m.level = 3;
    m.src = 1;
    m.dst = 2;
    BitWriter w;
    encode(m, true, w);
    CHECK(w.bit_count() == kShortBits);
    CHECK(decode_single(w.bytes(), true) == m);
  }
}

TEST_CASE("long messages are 152 bits compressed, 208 wide") {
  Message m;
  m.kind = MsgKind::Report;
  m.level = 7;
  m.src = 11;
  m.dst = 12;
  m.weight = WireWeight{0.625, 42};
  BitWriter wc;
  encode(m, true, wc);
  CHECK(wc.bit_count() == kLongCompressedBits);
  CHECK(decode_single(wc.bytes(), true) == m);

  m.weight.tie = (std::uint64_t(3) << 32) | 9;  // special_id form
  BitWriter ww;
  encode(m, false, ww);
  CHECK(ww.bit_count() == kLongWideBits);
  CHECK(decode_single(ww.bytes(), false) == m);
}

TEST_CASE("all-zero Test message leaves only the kind bits set") {
  Message m;
  m.kind = MsgKind::Test;
  const auto bytes = encode_one(m, true);
  REQUIRE(bytes.size() == kLongCompressedBits / 8);
  CHECK(bytes[0] == 2);  // kind code in the low three header bits
  for (std::size_t i = 1; i < bytes.size(); ++i) CHECK(bytes[i] == 0);
}

TEST_CASE("infinite Report weight sets every tie bit") {
  Message m;
  m.kind = MsgKind::Report;
  m.src = 5;
  m.dst = 6;
  m.weight = WireWeight::infinite();
  const auto wide = encode_one(m, false);
  REQUIRE(wide.size() == 26);
  for (std::size_t i = 18; i < 26; ++i) CHECK(wide[i] == 0xff);
  CHECK(decode_single(wide, false) == m);

  const auto narrow = encode_one(m, true);
  REQUIRE(narrow.size() == 19);
  CHECK(narrow[18] == 0xff);
  CHECK(decode_single(narrow, true) == m);
}

TEST_CASE("encode/decode round-trip fuzz") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100000; ++i) {
    const bool compressed = (rng() & 1) != 0;
    const Message m = random_message(rng, compressed);
    const auto bytes = encode_one(m, compressed);
    CHECK(bytes.size() * 8 == encoded_bits(m.kind, compressed));
    const Message back = decode_single(bytes, compressed);
    if (!(back == m)) {
      REQUIRE(back == m);  // stop the flood on first mismatch
    }
  }
}

TEST_CASE("decode ignores header padding bits") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const bool compressed = (rng() & 1) != 0;
    const Message m = random_message(rng, compressed);
    auto bytes = encode_one(m, compressed);
    // Bits 9..15 live in the upper seven bits of header byte 1.
    bytes[1] ^= static_cast<std::uint8_t>((1 + rng() % 0x7f) << 1);
    CHECK(decode_single(bytes, compressed) == m);
  }
}

TEST_CASE("decode rejects unknown kind codes") {
  std::vector<std::uint8_t> bytes(kShortBits / 8, 0);
  bytes[0] = 7;
  CHECK_THROWS_AS(decode_single(bytes, true), ProtocolError);
}

TEST_CASE("decode rejects wrong lengths") {
  Message m;
  m.kind = MsgKind::Connect;
  m.src = 1;
  m.dst = 2;
  auto bytes = encode_one(m, true);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_single(truncated, true), ProtocolError);
  auto padded = bytes;
  padded.push_back(0);
  CHECK_THROWS_AS(decode_single(padded, true), ProtocolError);

  // A long message decoded in the wrong mode has the wrong length too.
  Message t;
  t.kind = MsgKind::Test;
  t.weight = WireWeight{0.5, 1};
  CHECK_THROWS_AS(decode_single(encode_one(t, true), false), ProtocolError);
}

TEST_CASE("encode rejects oversized levels and ranks") {
  Message m;
  m.kind = MsgKind::Connect;
  m.level = 32;
  BitWriter w;
  CHECK_THROWS_AS(encode(m, true, w), ProtocolError);

  Message t;
  t.kind = MsgKind::Test;
  t.weight = WireWeight{0.5, 256};  // rank does not fit 8 bits
  BitWriter w2;
  CHECK_THROWS_AS(encode(t, true, w2), ProtocolError);
  BitWriter w3;
  CHECK_NOTHROW(encode(t, false, w3));
}

TEST_CASE("aggregation buffer flush threshold") {
  AggregationBuffer b(0, 10000, true);
  Message m;
  m.kind = MsgKind::Connect;
  m.src = 1;
  m.dst = 2;
  CHECK_FALSE(b.push(m));  // one short message is nowhere near the limit
  std::size_t pushed = 1;
  while (!b.push(m)) ++pushed;
  ++pushed;
  // ~1000 short messages fit a 10000-byte block.
  CHECK(pushed >= 990);
  CHECK(pushed <= 1000);
  const std::vector<std::uint8_t> block = b.take();
  CHECK(block.size() <= 10000);
  CHECK(block.size() == pushed * (kShortBits / 8));
  CHECK(b.empty());
  CHECK(b.message_count() == 0);
}

TEST_CASE("aggregation preserves push order") {
  std::mt19937_64 rng(5);
  AggregationBuffer b(3, 10000, false);
  std::vector<Message> pushed;
  for (int i = 0; i < 64; ++i) {
    const Message m = random_message(rng, false);
    pushed.push_back(m);
    b.push(m);
  }
  CHECK(b.message_count() == 64);
  const std::vector<std::uint8_t> block = b.take();
  const std::vector<Message> decoded = decode_block(block, false);
  REQUIRE(decoded.size() == pushed.size());
  for (std::size_t i = 0; i < pushed.size(); ++i) {
    CHECK(decoded[i] == pushed[i]);
  }
}

TEST_CASE("aggregation rejects a limit below one message") {
  CHECK_THROWS_AS(AggregationBuffer(0, 16, false), ParameterError);
}
