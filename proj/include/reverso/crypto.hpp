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
#include <memory>
#include <optional>
#include <span>
#include <string_view>

namespace reverso::crypto {

inline constexpr std::size_t kSecretLen = 32;
inline constexpr std::size_t kKeyLen = 32;
inline constexpr std::size_t kIvLen = 12;
inline constexpr std::size_t kSampleLen = 16;
inline constexpr std::size_t kMaskLen = 16;

/// Mask bytes consumed by header protection: flags + up to 4 pn bytes, plus
/// up to 4 stream-id and 4 offset bytes in Reverso mode.
inline constexpr std::size_t kBaselineMaskUse = 5;
inline constexpr std::size_t kReversoMaskUse = 13;

using Key = std::array<std::uint8_t, kKeyLen>;
using Iv = std::array<std::uint8_t, kIvLen>;
using HpMask = std::array<std::uint8_t, kMaskLen>;

/// Keys for one direction of a connection.
struct KeySchedule {
  Key payload_key{};
  Iv payload_iv{};
  Key hp_key{};

  friend bool operator==(const KeySchedule&, const KeySchedule&) = default;
};

/// HKDF-SHA256 extract with a fixed salt, then expand per output with
/// "<label> key", "<label> iv" and "<label> hp" as info.
KeySchedule derive_keys(std::span<const std::uint8_t> shared_secret,
                        std::string_view direction_label);

/// IV XOR packet number, right-aligned.
Iv make_nonce(const Iv& iv, std::uint64_t packet_number) noexcept;

// AES-256-GCM payload protection and AES-256-ECB header-protection masks,
// with cipher contexts prepared once per key schedule. Not thread-safe; a
// connection owns one instance per direction.
class PacketCipher {
 public:
  explicit PacketCipher(const KeySchedule& keys);
  ~PacketCipher();
  PacketCipher(PacketCipher&&) noexcept;
  PacketCipher& operator=(PacketCipher&&) noexcept;
  PacketCipher(const PacketCipher&) = delete;
  PacketCipher& operator=(const PacketCipher&) = delete;

  /// Writes ciphertext || tag into `dest`. `dest` may alias `plaintext`
  /// exactly. Returns plaintext.size() + 16.
  std::size_t seal(std::uint64_t packet_number,
                   std::span<const std::uint8_t> aad,
                   std::span<const std::uint8_t> plaintext,
                   std::span<std::uint8_t> dest);

  /// Atomic open: returns the plaintext length, or nullopt when the tag does
  /// not verify. `dest` may alias `ciphertext` exactly; on failure its
  /// contents are unspecified.
  std::optional<std::size_t> open(std::uint64_t packet_number,
                                  std::span<const std::uint8_t> aad,
                                  std::span<const std::uint8_t> ciphertext,
                                  std::span<std::uint8_t> dest);

  HpMask hp_mask(std::span<const std::uint8_t> sample);

  const KeySchedule& keys() const noexcept { return keys_; }

 private:
  struct Contexts;
  KeySchedule keys_;
  std::unique_ptr<Contexts> ctx_;
};

/// Up to four least significant bytes of a 62-bit integer, big-endian.
struct Truncated {
  std::array<std::uint8_t, 4> bytes{};
  std::size_t length = 0;

  std::uint64_t value() const noexcept;
  friend bool operator==(const Truncated&, const Truncated&) = default;
};

/// Smallest byte count n in 1..4 whose half-window 2^(8n-1) exceeds
/// `distance + 1`. Throws kTruncationRange when none does.
std::size_t truncated_length(std::uint64_t distance);

/// Truncates with the window sized from |full - reference|.
Truncated truncate_int(std::uint64_t full, std::uint64_t reference);

/// Low `length` bytes of `full` (caller chose the length).
Truncated truncate_to(std::uint64_t full, std::size_t length);

/// Candidate-window reconstruction: the value congruent to `truncated`
/// modulo 2^(8*length) closest to reference + 1.
std::uint64_t expand_int(std::uint64_t truncated, std::size_t length,
                         std::uint64_t reference) noexcept;
std::uint64_t expand_int(const Truncated& truncated,
                         std::uint64_t reference) noexcept;

}  // namespace reverso::crypto
