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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Variable-length integers with 1, 2, 4 or 8 byte length classes.
//
// The forward codec keeps the length tag in the two most significant bits of
// the first byte (the familiar QUIC v1 layout). The reversed codec shifts the
// value left by two and stores the tag in the two least significant bits of
// the last byte, so a reader walking right-to-left learns the length from the
// first byte it touches.

namespace reverso::varint {

struct Decoded {
  std::uint64_t value;
  std::size_t length;

  friend bool operator==(const Decoded&, const Decoded&) = default;
};

/// Minimal encoded length (1, 2, 4 or 8). Throws kEncodingOverflow for
/// values >= 2^62. Identical for both codecs.
std::size_t encoded_length(std::uint64_t value);

std::size_t length_for_tag(unsigned tag) noexcept;
unsigned tag_for_length(std::size_t length);

std::size_t encode_forward(std::uint64_t value, std::span<std::uint8_t> out);
Decoded decode_forward(std::span<const std::uint8_t> buf, std::size_t pos);

std::size_t encode_reversed(std::uint64_t value, std::span<std::uint8_t> out);

/// Decodes the varint whose last byte sits at `end - 1`.
Decoded decode_reversed_backward(std::span<const std::uint8_t> buf,
                                 std::size_t end);

}  // namespace reverso::varint
