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

#include "reverso/varint.hpp"

#include "reverso/error.hpp"
#include "reverso/types.hpp"

namespace reverso::varint {

std::size_t encoded_length(std::uint64_t value) {
  if (value < (std::uint64_t{1} << 6)) return 1;
  if (value < (std::uint64_t{1} << 14)) return 2;
  if (value < (std::uint64_t{1} << 30)) return 4;
  if (value <= kMaxVarInt) return 8;
  throw Error(ErrorCode::kEncodingOverflow);
}

std::size_t length_for_tag(unsigned tag) noexcept {
  return std::size_t{1} << (tag & 0x03);
}

unsigned tag_for_length(std::size_t length) {
  switch (length) {
    case 1: return 0;
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
    default: throw Error(ErrorCode::kInvalidArgument, "varint length");
  }
}

namespace {

void put_be(std::uint64_t v, std::size_t len, std::uint8_t* out) {
  for (std::size_t i = len; i-- > 0;) {
    out[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
}

std::uint64_t get_be(const std::uint8_t* in, std::size_t len) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

std::size_t encode_forward(std::uint64_t value, std::span<std::uint8_t> out) {
  const std::size_t len = encoded_length(value);
  if (out.size() < len) throw Error(ErrorCode::kBufferTooSmall);
  put_be(value, len, out.data());
  out[0] |= static_cast<std::uint8_t>(tag_for_length(len) << 6);
  return len;
}

Decoded decode_forward(std::span<const std::uint8_t> buf, std::size_t pos) {
  if (pos >= buf.size()) throw Error(ErrorCode::kTruncatedVarInt);
  const std::size_t len = length_for_tag(buf[pos] >> 6);
  if (buf.size() - pos < len) throw Error(ErrorCode::kTruncatedVarInt);
  std::uint64_t v = get_be(buf.data() + pos, len);
  v &= (len == 8) ? kMaxVarInt : ((std::uint64_t{1} << (8 * len - 2)) - 1);
  return {v, len};
}

std::size_t encode_reversed(std::uint64_t value, std::span<std::uint8_t> out) {
  const std::size_t len = encoded_length(value);
  if (out.size() < len) throw Error(ErrorCode::kBufferTooSmall);
  put_be((value << 2) | tag_for_length(len), len, out.data());
  return len;
}

Decoded decode_reversed_backward(std::span<const std::uint8_t> buf,
                                 std::size_t end) {
  if (end == 0 || end > buf.size()) throw Error(ErrorCode::kTruncatedVarInt);
  const std::size_t len = length_for_tag(buf[end - 1]);
  if (end < len) throw Error(ErrorCode::kTruncatedVarInt);
  return {get_be(buf.data() + (end - len), len) >> 2, len};
}

}  // namespace reverso::varint
