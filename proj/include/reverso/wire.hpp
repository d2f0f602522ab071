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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "reverso/types.hpp"

// Transport frames and their two serializations.
//
// Forward frames start with a type byte and list fields left to right.
// Reversed frames list the same fields right to left and end with the type
// byte, so a parser starting at the end of the plaintext reads them in the
// usual logical order. In a reversed packet the first stream frame sits at
// plaintext position 0, carries no Length field and always an Offset.

namespace reverso::wire {

namespace frame_type {
inline constexpr std::uint8_t kPadding = 0x00;
inline constexpr std::uint8_t kPing = 0x01;
inline constexpr std::uint8_t kAck = 0x02;
inline constexpr std::uint8_t kStream = 0x08;
inline constexpr std::uint8_t kStreamOff = 0x04;
inline constexpr std::uint8_t kStreamLen = 0x02;
inline constexpr std::uint8_t kStreamFin = 0x01;
inline constexpr std::uint8_t kMaxStreamData = 0x11;
inline constexpr std::uint8_t kConnectionClose = 0x1c;
}  // namespace frame_type

inline constexpr std::size_t kMaxAckRanges = 32;

struct PaddingFrame {
  friend bool operator==(const PaddingFrame&, const PaddingFrame&) = default;
};

struct PingFrame {
  friend bool operator==(const PingFrame&, const PingFrame&) = default;
};

struct AckRange {
  std::uint64_t gap = 0;
  std::uint64_t length = 0;
  friend bool operator==(const AckRange&, const AckRange&) = default;
};

/// Acknowledged packet numbers: [largest - first_range, largest], then each
/// range below the previous one, separated by `gap + 1` unacknowledged
/// numbers and spanning `length + 1` numbers.
struct AckFrame {
  std::uint64_t largest_acked = 0;
  std::uint64_t ack_delay = 0;
  std::uint64_t first_range = 0;
  std::vector<AckRange> ranges;
  friend bool operator==(const AckFrame&, const AckFrame&) = default;
};

/// `data` is a view: into the sender's buffer when serializing, into the
/// plaintext when parsing.
struct StreamFrame {
  std::uint64_t stream_id = 0;
  std::uint64_t offset = 0;
  bool fin = false;
  std::span<const std::uint8_t> data;

  friend bool operator==(const StreamFrame& a, const StreamFrame& b) {
    return a.stream_id == b.stream_id && a.offset == b.offset && a.fin == b.fin &&
           std::ranges::equal(a.data, b.data);
  }
};

struct MaxStreamDataFrame {
  std::uint64_t stream_id = 0;
  std::uint64_t maximum = 0;
  friend bool operator==(const MaxStreamDataFrame&, const MaxStreamDataFrame&) = default;
};

struct ConnectionCloseFrame {
  std::uint64_t error_code = 0;
  std::vector<std::uint8_t> reason;
  friend bool operator==(const ConnectionCloseFrame&, const ConnectionCloseFrame&) = default;
};

using Frame = std::variant<PaddingFrame, PingFrame, AckFrame, StreamFrame,
                           MaxStreamDataFrame, ConnectionCloseFrame>;

/// Exact serialized size. For stream frames `with_length` selects whether
/// the Length field is written; in Reverso the leftmost stream frame always
/// carries an Offset.
std::size_t frame_wire_size(const Frame& frame, WireMode mode,
                            bool with_length = true);

std::size_t serialize_forward(std::span<const Frame> frames,
                              std::span<std::uint8_t> out);

std::size_t serialize_reversed(std::span<const Frame> frames,
                               std::span<std::uint8_t> out);

/// Forward parse; `sink(Frame&&)` is called per frame in wire order.
template <typename Sink>
void parse_forward(std::span<const std::uint8_t> plaintext, Sink&& sink);

/// Backward parse from the end of `plaintext`; frames are reported in
/// processing order, so a zero-copy stream frame comes last.
template <typename Sink>
void parse_reversed(std::span<const std::uint8_t> plaintext, Sink&& sink);

std::vector<Frame> parse_forward(std::span<const std::uint8_t> plaintext);
std::vector<Frame> parse_reversed(std::span<const std::uint8_t> plaintext);

namespace detail {
// Parses one frame ending at `*cursor` and moves the cursor left.
Frame parse_one_reversed(std::span<const std::uint8_t> plaintext,
                         std::size_t* cursor);
// Parses one frame starting at `*cursor` and moves the cursor right.
Frame parse_one_forward(std::span<const std::uint8_t> plaintext,
                        std::size_t* cursor);
}  // namespace detail

template <typename Sink>
void parse_forward(std::span<const std::uint8_t> plaintext, Sink&& sink) {
  std::size_t cursor = 0;
  while (cursor < plaintext.size()) {
    sink(detail::parse_one_forward(plaintext, &cursor));
  }
}

template <typename Sink>
void parse_reversed(std::span<const std::uint8_t> plaintext, Sink&& sink) {
  std::size_t cursor = plaintext.size();
  while (cursor > 0) {
    sink(detail::parse_one_reversed(plaintext, &cursor));
  }
}

}  // namespace reverso::wire
