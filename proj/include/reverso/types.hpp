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

namespace reverso {

/// Selects the packet layout. Baseline is the conventional left-to-right
/// format; Reverso places stream data first and parses control backward.
enum class WireMode : std::uint8_t { kBaseline = 0, kReverso = 1 };

inline constexpr std::uint64_t kMaxVarInt = (std::uint64_t{1} << 62) - 1;
inline constexpr std::uint64_t kStreamIdLimit = std::uint64_t{1} << 30;
inline constexpr std::size_t kMaxDatagramSize = 1350;
inline constexpr std::size_t kAeadTagLen = 16;
inline constexpr std::size_t kConnectionIdLen = 8;

inline const char* mode_name(WireMode mode) {
  return mode == WireMode::kReverso ? "reverso" : "baseline";
}

}  // namespace reverso
