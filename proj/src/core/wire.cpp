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

#include "reverso/wire.hpp"

#include <cstring>

#include "reverso/error.hpp"
#include "reverso/varint.hpp"

namespace reverso::wire {

namespace {

using varint::encoded_length;

std::uint8_t stream_type(const StreamFrame& f, bool has_offset, bool has_length) {
  std::uint8_t t = frame_type::kStream;
  if (has_offset) t |= frame_type::kStreamOff;
  if (has_length) t |= frame_type::kStreamLen;
  if (f.fin) t |= frame_type::kStreamFin;
  return t;
}

bool stream_has_offset(const StreamFrame& f, WireMode mode, bool with_length) {
  return f.offset != 0 || (mode == WireMode::kReverso && !with_length);
}

class Writer {
 public:
  explicit Writer(std::span<std::uint8_t> out) : out_(out) {}

  void u8(std::uint8_t v) {
    need(1);
    out_[pos_++] = v;
  }
  void forward(std::uint64_t v) {
    need(encoded_length(v));
    pos_ += varint::encode_forward(v, out_.subspan(pos_));
  }
  void reversed(std::uint64_t v) {
    need(encoded_length(v));
    pos_ += varint::encode_reversed(v, out_.subspan(pos_));
  }
  void bytes(std::span<const std::uint8_t> b) {
    need(b.size());
    if (!b.empty()) std::memcpy(out_.data() + pos_, b.data(), b.size());
    pos_ += b.size();
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (out_.size() - pos_ < n) throw Error(ErrorCode::kBufferTooSmall);
  }
  std::span<std::uint8_t> out_;
  std::size_t pos_ = 0;
};

void check_stream(const StreamFrame& f) {
  if (f.stream_id >= kStreamIdLimit) throw Error(ErrorCode::kStreamIdOverflow);
  if (f.offset > kMaxVarInt || kMaxVarInt - f.offset < f.data.size()) {
    throw Error(ErrorCode::kEncodingOverflow, "stream offset + length");
  }
}

void check_ack(const AckFrame& f) {
  if (f.ranges.size() > kMaxAckRanges) {
    throw Error(ErrorCode::kInvalidArgument, "too many ack ranges");
  }
}

void write_forward(Writer& w, const Frame& frame, bool with_length) {
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PaddingFrame>) {
          w.u8(frame_type::kPadding);
        } else if constexpr (std::is_same_v<T, PingFrame>) {
          w.u8(frame_type::kPing);
        } else if constexpr (std::is_same_v<T, AckFrame>) {
          check_ack(f);
          w.u8(frame_type::kAck);
          w.forward(f.largest_acked);
          w.forward(f.ack_delay);
          w.forward(f.ranges.size());
          w.forward(f.first_range);
          for (const auto& r : f.ranges) {
            w.forward(r.gap);
            w.forward(r.length);
          }
        } else if constexpr (std::is_same_v<T, StreamFrame>) {
          check_stream(f);
          const bool has_off = stream_has_offset(f, WireMode::kBaseline, with_length);
          w.u8(stream_type(f, has_off, with_length));
          w.forward(f.stream_id);
          if (has_off) w.forward(f.offset);
          if (with_length) w.forward(f.data.size());
          w.bytes(f.data);
        } else if constexpr (std::is_same_v<T, MaxStreamDataFrame>) {
          w.u8(frame_type::kMaxStreamData);
          w.forward(f.stream_id);
          w.forward(f.maximum);
        } else if constexpr (std::is_same_v<T, ConnectionCloseFrame>) {
          w.u8(frame_type::kConnectionClose);
          w.forward(f.error_code);
          w.forward(f.reason.size());
          w.bytes(f.reason);
        }
      },
      frame);
}

void write_reversed(Writer& w, const Frame& frame, bool with_length) {
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PaddingFrame>) {
          w.u8(frame_type::kPadding);
        } else if constexpr (std::is_same_v<T, PingFrame>) {
          w.u8(frame_type::kPing);
        } else if constexpr (std::is_same_v<T, AckFrame>) {
          check_ack(f);
          for (auto it = f.ranges.rbegin(); it != f.ranges.rend(); ++it) {
            w.reversed(it->length);
            w.reversed(it->gap);
          }
          w.reversed(f.first_range);
          w.reversed(f.ranges.size());
          w.reversed(f.ack_delay);
          w.reversed(f.largest_acked);
          w.u8(frame_type::kAck);
        } else if constexpr (std::is_same_v<T, StreamFrame>) {
          check_stream(f);
          const bool has_off = stream_has_offset(f, WireMode::kReverso, with_length);
          w.bytes(f.data);
          if (with_length) w.reversed(f.data.size());
          if (has_off) w.reversed(f.offset);
          w.reversed(f.stream_id);
          w.u8(stream_type(f, has_off, with_length));
        } else if constexpr (std::is_same_v<T, MaxStreamDataFrame>) {
          w.reversed(f.maximum);
          w.reversed(f.stream_id);
          w.u8(frame_type::kMaxStreamData);
        } else if constexpr (std::is_same_v<T, ConnectionCloseFrame>) {
          w.bytes(f.reason);
          w.reversed(f.reason.size());
          w.reversed(f.error_code);
          w.u8(frame_type::kConnectionClose);
        }
      },
      frame);
}

// Reads fields walking towards position 0.
class BackwardReader {
 public:
  BackwardReader(std::span<const std::uint8_t> buf, std::size_t cursor)
      : buf_(buf), cur_(cursor) {}

  std::uint8_t u8() {
    if (cur_ == 0) throw Error(ErrorCode::kMalformedFrame, "cursor underflow");
    return buf_[--cur_];
  }
  std::uint64_t varint() {
    if (cur_ == 0) throw Error(ErrorCode::kMalformedFrame, "cursor underflow");
    const std::size_t len = varint::length_for_tag(buf_[cur_ - 1]);
    if (cur_ < len) throw Error(ErrorCode::kMalformedFrame, "truncated varint");
    const auto d = varint::decode_reversed_backward(buf_, cur_);
    cur_ -= d.length;
    return d.value;
  }
  std::span<const std::uint8_t> bytes(std::uint64_t n) {
    if (n > cur_) throw Error(ErrorCode::kMalformedFrame, "field past start");
    cur_ -= static_cast<std::size_t>(n);
    return buf_.subspan(cur_, static_cast<std::size_t>(n));
  }
  std::span<const std::uint8_t> rest() {
    auto r = buf_.first(cur_);
    cur_ = 0;
    return r;
  }
  std::size_t cursor() const { return cur_; }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t cur_;
};

class ForwardReader {
 public:
  ForwardReader(std::span<const std::uint8_t> buf, std::size_t cursor)
      : buf_(buf), cur_(cursor) {}

  std::uint8_t u8() {
    if (cur_ >= buf_.size()) throw Error(ErrorCode::kMalformedFrame, "cursor overflow");
    return buf_[cur_++];
  }
  std::uint64_t varint() {
    if (cur_ >= buf_.size()) throw Error(ErrorCode::kMalformedFrame, "cursor overflow");
    const std::size_t len = varint::length_for_tag(buf_[cur_] >> 6);
    if (buf_.size() - cur_ < len) throw Error(ErrorCode::kMalformedFrame, "truncated varint");
    const auto d = varint::decode_forward(buf_, cur_);
    cur_ += d.length;
    return d.value;
  }
  std::span<const std::uint8_t> bytes(std::uint64_t n) {
    if (n > buf_.size() - cur_) throw Error(ErrorCode::kMalformedFrame, "field past end");
    auto r = buf_.subspan(cur_, static_cast<std::size_t>(n));
    cur_ += static_cast<std::size_t>(n);
    return r;
  }
  std::span<const std::uint8_t> rest() {
    auto r = buf_.subspan(cur_);
    cur_ = buf_.size();
    return r;
  }
  std::size_t cursor() const { return cur_; }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t cur_;
};

void validate_ack(const AckFrame& f) {
  if (f.first_range > f.largest_acked) {
    throw Error(ErrorCode::kMalformedFrame, "ack range below zero");
  }
  std::uint64_t smallest = f.largest_acked - f.first_range;
  for (const auto& r : f.ranges) {
    if (smallest < r.gap + 2 || r.gap > kMaxVarInt) {
      throw Error(ErrorCode::kMalformedFrame, "ack gap below zero");
    }
    const std::uint64_t top = smallest - r.gap - 2;
    if (r.length > top) throw Error(ErrorCode::kMalformedFrame, "ack range below zero");
    smallest = top - r.length;
  }
}

void validate_stream(const StreamFrame& f) {
  if (f.stream_id >= kStreamIdLimit) {
    throw Error(ErrorCode::kMalformedFrame, "stream id out of range");
  }
  if (kMaxVarInt - f.offset < f.data.size()) {
    throw Error(ErrorCode::kMalformedFrame, "stream end beyond 2^62");
  }
}

template <typename Reader>
Frame read_frame(Reader& r, std::uint8_t type, bool backward) {
  switch (type) {
    case frame_type::kPadding:
      return PaddingFrame{};
    case frame_type::kPing:
      return PingFrame{};
    case frame_type::kAck: {
      AckFrame f;
      f.largest_acked = r.varint();
      f.ack_delay = r.varint();
      const std::uint64_t count = r.varint();
      if (count > kMaxAckRanges) throw Error(ErrorCode::kMalformedFrame, "ack range count");
      f.first_range = r.varint();
      f.ranges.resize(static_cast<std::size_t>(count));
      for (auto& range : f.ranges) {
        range.gap = r.varint();
        range.length = r.varint();
      }
      validate_ack(f);
      return f;
    }
    case frame_type::kMaxStreamData: {
      MaxStreamDataFrame f;
      f.stream_id = r.varint();
      f.maximum = r.varint();
      if (f.stream_id >= kStreamIdLimit) {
        throw Error(ErrorCode::kMalformedFrame, "stream id out of range");
      }
      return f;
    }
    case frame_type::kConnectionClose: {
      ConnectionCloseFrame f;
      f.error_code = r.varint();
      const auto reason = r.bytes(r.varint());
      f.reason.assign(reason.begin(), reason.end());
      return f;
    }
    default:
      break;
  }
  if ((type & ~0x07) == frame_type::kStream) {
    StreamFrame f;
    f.fin = (type & frame_type::kStreamFin) != 0;
    f.stream_id = r.varint();
    const bool has_off = (type & frame_type::kStreamOff) != 0;
    if (has_off) f.offset = r.varint();
    if (type & frame_type::kStreamLen) {
      f.data = r.bytes(r.varint());
    } else {
      // Length-less frame: its data runs to the plaintext boundary.
      if (backward && !has_off) {
        throw Error(ErrorCode::kMalformedFrame, "leftmost stream frame without offset");
      }
      f.data = r.rest();
    }
    validate_stream(f);
    return f;
  }
  throw Error(ErrorCode::kUnknownFrameType);
}

}  // namespace

std::size_t frame_wire_size(const Frame& frame, WireMode mode, bool with_length) {
  return std::visit(
      [&](const auto& f) -> std::size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PaddingFrame> || std::is_same_v<T, PingFrame>) {
          return 1;
        } else if constexpr (std::is_same_v<T, AckFrame>) {
          std::size_t n = 1 + encoded_length(f.largest_acked) + encoded_length(f.ack_delay) +
                          encoded_length(f.ranges.size()) + encoded_length(f.first_range);
          for (const auto& r : f.ranges) n += encoded_length(r.gap) + encoded_length(r.length);
          return n;
        } else if constexpr (std::is_same_v<T, StreamFrame>) {
          std::size_t n = 1 + encoded_length(f.stream_id) + f.data.size();
          if (stream_has_offset(f, mode, with_length)) n += encoded_length(f.offset);
          if (with_length) n += encoded_length(f.data.size());
          return n;
        } else if constexpr (std::is_same_v<T, MaxStreamDataFrame>) {
          return 1 + encoded_length(f.stream_id) + encoded_length(f.maximum);
        } else {
          return 1 + encoded_length(f.error_code) + encoded_length(f.reason.size()) +
                 f.reason.size();
        }
      },
      frame);
}

std::size_t serialize_forward(std::span<const Frame> frames, std::span<std::uint8_t> out) {
  Writer w(out);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_forward(w, frames[i], i + 1 != frames.size());
  }
  return w.pos();
}

std::size_t serialize_reversed(std::span<const Frame> frames, std::span<std::uint8_t> out) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (std::holds_alternative<StreamFrame>(frames[i]) &&
        !std::holds_alternative<StreamFrame>(frames[0])) {
      throw Error(ErrorCode::kFrameOrderViolation);
    }
  }
  Writer w(out);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const bool leftmost = i == 0 && std::holds_alternative<StreamFrame>(frames[i]);
    write_reversed(w, frames[i], !leftmost);
  }
  return w.pos();
}

namespace detail {

Frame parse_one_reversed(std::span<const std::uint8_t> plaintext, std::size_t* cursor) {
  BackwardReader r(plaintext, *cursor);
  const std::uint8_t type = r.u8();
  Frame f = read_frame(r, type, /*backward=*/true);
  *cursor = r.cursor();
  return f;
}

Frame parse_one_forward(std::span<const std::uint8_t> plaintext, std::size_t* cursor) {
  ForwardReader r(plaintext, *cursor);
  const std::uint8_t type = r.u8();
  Frame f = read_frame(r, type, /*backward=*/false);
  *cursor = r.cursor();
  return f;
}

}  // namespace detail

std::vector<Frame> parse_forward(std::span<const std::uint8_t> plaintext) {
  std::vector<Frame> frames;
  parse_forward(plaintext, [&](Frame&& f) { frames.push_back(std::move(f)); });
  return frames;
}

std::vector<Frame> parse_reversed(std::span<const std::uint8_t> plaintext) {
  std::vector<Frame> frames;
  parse_reversed(plaintext, [&](Frame&& f) { frames.push_back(std::move(f)); });
  return frames;
}

}  // namespace reverso::wire
