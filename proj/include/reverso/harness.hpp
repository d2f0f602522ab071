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
#include <functional>
#include <span>
#include <vector>

#include "reverso/types.hpp"

namespace reverso::harness {

/// Network model between two endpoints. Each direction draws from its own
/// generator seeded from `seed`.
struct PipeConfig {
  std::uint64_t seed = 1;
  double reorder_prob = 0.0;
  // A reordered packet is held back for 1..reorder_depth later packets.
  std::uint32_t reorder_depth = 3;
  double loss_prob = 0.0;
  double duplicate_prob = 0.0;

  /// Throws InvalidArgument unless probabilities are in [0,1] and depth >= 1.
  void validate() const;
};

struct TransferReport {
  WireMode mode = WireMode::kReverso;
  std::uint64_t bytes_transferred = 0;
  std::uint32_t streams = 0;
  double wall_time_s = 0.0;
  double throughput_MBps = 0.0;
  std::uint64_t payload_bytes_copied = 0;
  std::uint64_t payload_bytes_zero_copy = 0;
  std::uint64_t payload_bytes_stashed = 0;
  std::uint64_t packets_in_order = 0;
  std::uint64_t packets_out_of_order = 0;
  double ordered_ratio = 1.0;
  std::uint64_t decrypt_failures = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t checksum = 0;  // FNV-1a over received streams in id order
  bool verified = false;       // received bytes equal the generated input
};

/// True when two reports agree on everything except timing.
bool same_outcome(const TransferReport& a, const TransferReport& b) noexcept;

/// 32-byte secret used by the simulated endpoints for a given seed.
std::array<std::uint8_t, 32> transfer_secret(std::uint64_t seed);

/// Deterministic payload for a stream: `size` bytes derived from (seed, id).
std::vector<std::uint8_t> stream_payload(std::uint64_t seed, std::uint64_t stream_id,
                                         std::size_t size);

std::uint64_t fnv1a(std::span<const std::uint8_t> data,
                    std::uint64_t state = 0xcbf29ce484222325ULL) noexcept;

/// Sees every client-to-server datagram as the server receives it, before
/// recv() touches it.
using DatagramObserver = std::function<void(std::span<const std::uint8_t>)>;

/// Sends `transfer_size` bytes from client to server over `n_streams`
/// streams (ids 1..n) through the pipe. Time is virtual: the clock only
/// advances, by one RTO, when both endpoints and both pipes are idle.
TransferReport run_transfer(WireMode mode, std::uint64_t transfer_size, std::uint32_t n_streams,
                            const PipeConfig& pipe, const DatagramObserver& observer = {});

struct BenchResult {
  WireMode mode = WireMode::kReverso;
  std::size_t packets = 0;
  std::uint64_t bytes = 0;  // datagram bytes per repetition
  std::size_t repetitions = 0;
  double median_ns = 0.0;
  double p5_ns = 0.0;
  double p95_ns = 0.0;
  double throughput_MBps = 0.0;  // bytes / median
  std::uint64_t payload_bytes_copied = 0;
  std::uint64_t payload_bytes_zero_copy = 0;
  double calibration_ns = 0.0;  // median of the same loop with a no-op receiver
};

struct BenchComparison {
  BenchResult baseline;
  BenchResult reverso;
  double improvement() const noexcept {
    return baseline.median_ns > 0 ? baseline.median_ns / reverso.median_ns - 1.0 : 0.0;
  }
};

/// Times the receive loop over `n_packets` in-order datagrams, rebuilding the
/// receiver outside the timed region for every repetition.
BenchResult bench_batch(WireMode mode, std::size_t n_packets,
                        std::size_t datagram_size = kMaxDatagramSize,
                        std::size_t repetitions = 1000, std::uint64_t seed = 1);

/// Both modes on identical traffic, repetitions interleaved.
BenchComparison bench_compare(std::size_t n_packets, std::size_t datagram_size = kMaxDatagramSize,
                              std::size_t repetitions = 1000, std::uint64_t seed = 1);

struct SweepPoint {
  std::uint64_t length = 0;   // requested buffered bytes
  std::size_t packets = 0;    // floor(length / datagram size), at least 1
  BenchComparison result;
};

std::vector<std::uint64_t> default_sweep_lengths();

SweepPoint sweep_point(std::uint64_t length, std::size_t repetitions, std::uint64_t seed = 1);

std::vector<SweepPoint> sweep_buffered_lengths(std::span<const std::uint64_t> lengths,
                                               std::size_t repetitions = 200,
                                               std::uint64_t seed = 1);

}  // namespace reverso::harness
