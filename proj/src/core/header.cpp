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

#include "reverso/header.hpp"

#include <algorithm>

#include "reverso/error.hpp"

namespace reverso::header {

namespace {

constexpr std::uint8_t kFixedBit = 0x40;
constexpr std::uint8_t kFormBit = 0x80;
constexpr std::uint8_t kKeyPhaseBit = 0x04;

void check_lengths(const ShortHeader& h, WireMode mode) {
  auto ok = [](std::size_t n) { return n >= 1 && n <= 4; };
  if (!ok(h.pn_length)) throw Error(ErrorCode::kInvalidArgument, "pn_length");
  if (mode == WireMode::kReverso && (!ok(h.sid_length) || !ok(h.off_length))) {
    throw Error(ErrorCode::kInvalidArgument, "stream field length");
  }
}

std::size_t fields_length(std::span<const std::uint8_t> packet, WireMode mode,
                          std::size_t* pn_len, std::size_t* sid_len) {
  const std::uint8_t flags = packet[0];
  *pn_len = (flags & 0x03) + 1u;
  *sid_len = mode == WireMode::kReverso ? ((flags >> 3) & 0x03) + 1u : 0;
  return *pn_len + *sid_len;
}

}  // namespace

std::size_t stream_id_length(std::uint64_t stream_id) {
  if (stream_id >= kStreamIdLimit) throw Error(ErrorCode::kStreamIdOverflow);
  for (std::size_t n = 1; n < 4; ++n) {
    if (stream_id < (std::uint64_t{1} << (8 * n - 2))) return n;
  }
  return 4;
}

std::size_t header_length(WireMode mode, const ShortHeader& h) noexcept {
  std::size_t len = kPnOffset + h.pn_length;
  if (mode == WireMode::kReverso) len += h.sid_length + h.off_length;
  return len;
}

std::size_t encode_header(WireMode mode, const ShortHeader& h,
                          std::span<std::uint8_t> out) {
  check_lengths(h, mode);
  if (mode == WireMode::kReverso) {
    if (h.stream_id >= kStreamIdLimit) throw Error(ErrorCode::kStreamIdOverflow);
    if (h.stream_id >= (std::uint64_t{1} << (8 * h.sid_length - 2))) {
      throw Error(ErrorCode::kInvalidArgument, "stream id exceeds sid_length");
    }
  }
  const std::size_t len = header_length(mode, h);
  if (out.size() < len) throw Error(ErrorCode::kBufferTooSmall);

  std::uint8_t flags = kFixedBit | static_cast<std::uint8_t>(h.pn_length - 1);
  if (h.key_phase) flags |= kKeyPhaseBit;
  if (mode == WireMode::kReverso) {
    flags |= static_cast<std::uint8_t>((h.sid_length - 1) << 3);
  }
  out[0] = flags;
  std::copy(h.dcid.begin(), h.dcid.end(), out.begin() + 1);

  std::size_t pos = kPnOffset;
  const auto pn = crypto::truncate_to(h.packet_number, h.pn_length);
  std::copy_n(pn.bytes.begin(), pn.length, out.begin() + pos);
  pos += pn.length;

  if (mode == WireMode::kReverso) {
    std::uint64_t wire_sid = (h.stream_id << 2) | (h.off_length - 1);
    for (std::size_t i = h.sid_length; i-- > 0;) {
      out[pos + i] = static_cast<std::uint8_t>(wire_sid);
      wire_sid >>= 8;
    }
    pos += h.sid_length;
    const auto off = crypto::truncate_to(h.offset, h.off_length);
    std::copy_n(off.bytes.begin(), off.length, out.begin() + pos);
    pos += off.length;
  }
  return pos;
}

std::size_t encode_header(WireMode mode, ShortHeader& h,
                          std::uint64_t reference_pn,
                          std::uint64_t reference_offset,
                          std::span<std::uint8_t> out) {
  h.pn_length = crypto::truncate_int(h.packet_number, reference_pn).length;
  if (mode == WireMode::kReverso) {
    h.sid_length = stream_id_length(h.stream_id);
    h.off_length = crypto::truncate_int(h.offset, reference_offset).length;
  }
  return encode_header(mode, static_cast<const ShortHeader&>(h), out);
}

void protect_header(WireMode mode, std::span<std::uint8_t> packet,
                    crypto::PacketCipher& cipher) {
  if (packet.size() < kMinPacketLen) {
    throw Error(ErrorCode::kPacketTooShortForSampling);
  }
  std::size_t pn_len = 0;
  std::size_t sid_len = 0;
  std::size_t masked = fields_length(packet, mode, &pn_len, &sid_len);
  if (mode == WireMode::kReverso) {
    const std::uint8_t sid_last = packet[kPnOffset + pn_len + sid_len - 1];
    masked += (sid_last & 0x03) + 1u;
  }
  const auto mask = cipher.hp_mask(packet.subspan(kSampleOffset, crypto::kSampleLen));
  packet[0] ^= mask[0] & kProtectedFlagBits;
  for (std::size_t i = 0; i < masked; ++i) packet[kPnOffset + i] ^= mask[1 + i];
}

RawHeader unprotect_header(WireMode mode, std::span<std::uint8_t> packet,
                           crypto::PacketCipher& cipher) {
  if (packet.size() < kMinPacketLen) {
    throw Error(ErrorCode::kPacketTooShortForSampling);
  }
  if ((packet[0] & kFormBit) != 0 || (packet[0] & kFixedBit) == 0) {
    throw Error(ErrorCode::kMalformedHeader, "not a short header");
  }
  const auto mask = cipher.hp_mask(packet.subspan(kSampleOffset, crypto::kSampleLen));
  packet[0] ^= mask[0] & kProtectedFlagBits;

  RawHeader raw;
  std::size_t pn_len = 0;
  std::size_t sid_len = 0;
  const std::size_t head = fields_length(packet, mode, &pn_len, &sid_len);
  for (std::size_t i = 0; i < head; ++i) packet[kPnOffset + i] ^= mask[1 + i];

  raw.key_phase = (packet[0] & kKeyPhaseBit) != 0;
  std::copy_n(packet.begin() + 1, kConnectionIdLen, raw.dcid.begin());
  raw.pn.length = pn_len;
  std::copy_n(packet.begin() + kPnOffset, pn_len, raw.pn.bytes.begin());
  std::size_t pos = kPnOffset + pn_len;

  if (mode == WireMode::kReverso) {
    std::uint64_t wire_sid = 0;
    for (std::size_t i = 0; i < sid_len; ++i) wire_sid = (wire_sid << 8) | packet[pos + i];
    pos += sid_len;
    raw.sid_length = sid_len;
    raw.stream_id = wire_sid >> 2;
    const std::size_t off_len = (wire_sid & 0x03) + 1;
    for (std::size_t i = 0; i < off_len; ++i) packet[pos + i] ^= mask[1 + head + i];
    raw.offset.length = off_len;
    std::copy_n(packet.begin() + pos, off_len, raw.offset.bytes.begin());
    pos += off_len;
  }
  raw.length = pos;
  return raw;
}

}  // namespace reverso::header
