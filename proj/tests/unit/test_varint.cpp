// Copyright 2026 The Reverso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "reverso/error.hpp"
#include "reverso/varint.hpp"
#include "testkit.hpp"

namespace {

using namespace reverso;
using testkit::Bytes;

Bytes fwd(std::uint64_t v) {
  Bytes b(8);
  b.resize(varint::encode_forward(v, b));
  return b;
}

Bytes rev(std::uint64_t v) {
  Bytes b(8);
  b.resize(varint::encode_reversed(v, b));
  return b;
}

// Reference encoder: two-bit length tag in the top bits of the first byte.
Bytes reference_forward(std::uint64_t v) {
  const std::size_t len = v < 64 ? 1 : v < 16384 ? 2 : v < (1ULL << 30) ? 4 : 8;
  const unsigned tag = len == 1 ? 0 : len == 2 ? 1 : len == 4 ? 2 : 3;
  const std::uint64_t word = v | (std::uint64_t{tag} << (8 * len - 2));
  Bytes b(len);
  for (std::size_t i = 0; i < len; ++i) b[i] = static_cast<std::uint8_t>(word >> (8 * (len - 1 - i)));
  return b;
}

TEST(VarInt, ForwardExamples) {
  EXPECT_EQ(fwd(0), (Bytes{0x00}));
  EXPECT_EQ(fwd(37), (Bytes{0x25}));
  EXPECT_EQ(fwd(15293), (Bytes{0x7b, 0xbd}));
  EXPECT_EQ(fwd(15293), reference_forward(15293));
}

TEST(VarInt, ForwardDecodeExamples) {
  const Bytes a{0x25};
  EXPECT_EQ(varint::decode_forward(a, 0), (varint::Decoded{37, 1}));
  const Bytes b{0x7b, 0xbd};
  EXPECT_EQ(varint::decode_forward(b, 0), (varint::Decoded{15293, 2}));
  const Bytes c{0x40};
  try {
    varint::decode_forward(c, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedVarInt);
  }
}

TEST(VarInt, ReversedExamples) {
  EXPECT_EQ(rev(0), (Bytes{0x00}));
  EXPECT_EQ(rev(37), (Bytes{0x94}));
  EXPECT_EQ(rev(15293), (Bytes{0xee, 0xf5}));
  const Bytes a{0x94};
  EXPECT_EQ(varint::decode_reversed_backward(a, 1), (varint::Decoded{37, 1}));
  const Bytes b{0xee, 0xf5};
  EXPECT_EQ(varint::decode_reversed_backward(b, 2), (varint::Decoded{15293, 2}));
  const Bytes c{0xf5};
  try {
    varint::decode_reversed_backward(c, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedVarInt);
  }
}

TEST(VarInt, BoundaryLengths) {
  const std::array<std::pair<std::uint64_t, std::size_t>, 8> cases{{
      {(1ULL << 6) - 1, 1}, {1ULL << 6, 2},
      {(1ULL << 14) - 1, 2}, {1ULL << 14, 4},
      {(1ULL << 30) - 1, 4}, {1ULL << 30, 8},
      {(1ULL << 62) - 1, 8}, {0, 1},
  }};
  for (const auto& [v, len] : cases) {
    EXPECT_EQ(fwd(v).size(), len) << v;
    EXPECT_EQ(rev(v).size(), len) << v;
    EXPECT_EQ(fwd(v), reference_forward(v)) << v;
  }
  EXPECT_THROW(fwd(1ULL << 62), Error);
  EXPECT_THROW(rev(1ULL << 62), Error);
}

TEST(VarInt, BufferTooSmall) {
  std::array<std::uint8_t, 1> one{};
  try {
    varint::encode_forward(300, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBufferTooSmall);
  }
}

TEST(VarInt, RandomRoundTripsBothDirections) {
  testkit::Gen g(11);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t v = g.varint_value();
    const Bytes f = fwd(v);
    EXPECT_EQ(f, reference_forward(v));
    EXPECT_EQ(varint::decode_forward(f, 0), (varint::Decoded{v, f.size()}));
    // Decode a reversed varint that sits after unrelated bytes.
    Bytes r = g.bytes(g.below(4));
    const std::size_t lead = r.size();
    const Bytes enc = rev(v);
    r.insert(r.end(), enc.begin(), enc.end());
    EXPECT_EQ(varint::decode_reversed_backward(r, r.size()), (varint::Decoded{v, enc.size()}));
    EXPECT_EQ(r.size() - lead, enc.size());
  }
}

}  // namespace
