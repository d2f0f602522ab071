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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "reverso/crypto.hpp"
#include "reverso/types.hpp"

// Short packet header.
//
//   flags(1) | dcid(8) | pn(1..4) [| stream-id(1..4) | offset(1..4)]
//
// flags: form(0) fixed(1) spin(0) sid_len-1(2) key_phase(1) pn_len-1(2).
// The bracketed fields exist only in Reverso mode. The wire stream id holds
// (stream_id << 2) | (offset_len - 1). The header-protection sample starts
// at a fixed 12 bytes past the packet-number offset in both modes.

namespace reverso::header {

using ConnectionId = std::array<std::uint8_t, kConnectionIdLen>;

inline constexpr std::size_t kPnOffset = 1 + kConnectionIdLen;
inline constexpr std::size_t kSampleOffset = kPnOffset + 12;
inline constexpr std::size_t kMinPacketLen = kSampleOffset + crypto::kSampleLen;
inline constexpr std::uint8_t kProtectedFlagBits = 0x1f;

struct ShortHeader {
  bool key_phase = false;
  std::size_t pn_length = 1;
  std::uint64_t packet_number = 0;
  ConnectionId dcid{};
  // Reverso only; stream_id 0 marks a control-only packet.
  std::uint64_t stream_id = 0;
  std::uint64_t offset = 0;
  std::size_t sid_length = 1;
  std::size_t off_length = 1;

  friend bool operator==(const ShortHeader&, const ShortHeader&) = default;
};

/// Minimal wire length for a stream id (with its two offset-length bits).
std::size_t stream_id_length(std::uint64_t stream_id);

std::size_t header_length(WireMode mode, const ShortHeader& h) noexcept;

/// Writes the unprotected header using the field lengths carried in `h`;
/// the packet number and offset are truncated to those lengths.
std::size_t encode_header(WireMode mode, const ShortHeader& h,
                          std::span<std::uint8_t> out);

/// Encodes after choosing pn/offset/stream-id lengths from the references.
std::size_t encode_header(WireMode mode, ShortHeader& h,
                          std::uint64_t reference_pn,
                          std::uint64_t reference_offset,
                          std::span<std::uint8_t> out);

/// Masks the protected header bits in place. `packet` holds the unprotected
/// header followed by the payload ciphertext.
void protect_header(WireMode mode, std::span<std::uint8_t> packet,
                    crypto::PacketCipher& cipher);

/// Header with protection removed but integers still truncated.
struct RawHeader {
  bool key_phase = false;
  ConnectionId dcid{};
  crypto::Truncated pn;
  std::uint64_t stream_id = 0;
  std::size_t sid_length = 0;
  crypto::Truncated offset;
  std::size_t length = 0;
};

/// Removes protection in place. Fields are NOT authenticated yet.
RawHeader unprotect_header(WireMode mode, std::span<std::uint8_t> packet,
                           crypto::PacketCipher& cipher);

struct DecodedHeader {
  ShortHeader header;
  std::size_t length = 0;
};

/// Unprotects and expands the packet number against `reference_pn` and the
/// offset against `offset_reference(stream_id)` (the stream's highest
/// contiguous offset, 0 for unknown streams).
template <typename OffsetReference>
DecodedHeader unprotect_and_decode(WireMode mode, std::span<std::uint8_t> packet,
                                   crypto::PacketCipher& cipher,
                                   std::uint64_t reference_pn,
                                   OffsetReference&& offset_reference) {
  const RawHeader raw = unprotect_header(mode, packet, cipher);
  DecodedHeader out;
  ShortHeader& h = out.header;
  h.key_phase = raw.key_phase;
  h.dcid = raw.dcid;
  h.pn_length = raw.pn.length;
  h.packet_number = crypto::expand_int(raw.pn, reference_pn);
  if (mode == WireMode::kReverso) {
    h.stream_id = raw.stream_id;
    h.sid_length = raw.sid_length;
    h.off_length = raw.offset.length;
    h.offset = crypto::expand_int(raw.offset, offset_reference(raw.stream_id));
  }
  out.length = raw.length;
  return out;
}

}  // namespace reverso::header
