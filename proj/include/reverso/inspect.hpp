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

#include <cstdint>
#include <span>
#include <string>

#include "reverso/endpoint.hpp"
#include "reverso/types.hpp"

namespace reverso {

struct InspectOptions {
  WireMode mode = WireMode::kReverso;
  Role sender = Role::kClient;  // selects the key direction
  std::uint64_t pn_reference = 0;
  std::uint64_t offset_reference = 0;
};

struct InspectResult {
  std::string text;
  bool authenticated = false;
};

/// Removes protection from a copy of `datagram` and describes the header
/// and frames. Throws on malformed headers; a failed tag is reported in the
/// result rather than thrown.
InspectResult inspect_datagram(std::span<const std::uint8_t> secret,
                               std::span<const std::uint8_t> datagram,
                               const InspectOptions& options);

}  // namespace reverso
