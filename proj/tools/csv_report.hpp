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

// CSV rows emitted by the command-line tool. Columns are fixed and appended
// to only at the end; parse_* accepts exactly what format_* writes.

#include <charconv>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace reverso::csv {

inline constexpr const char* kBenchHeader =
    "mode,scenario,bytes,median_ns,p5_ns,p95_ns,throughput_MBps,copied_bytes,zero_copy_bytes,"
    "improvement";

struct BenchRow {
  std::string mode;
  std::string scenario;
  std::uint64_t bytes = 0;
  double median_ns = 0;
  double p5_ns = 0;
  double p95_ns = 0;
  double throughput_MBps = 0;
  std::uint64_t copied_bytes = 0;
  std::uint64_t zero_copy_bytes = 0;
  double improvement = 0;  // baseline median / this median - 1
};

inline constexpr const char* kSimulateHeader =
    "mode,bytes_transferred,streams,seed,reorder_prob,reorder_depth,loss_prob,duplicate_prob,"
    "wall_time_s,throughput_MBps,payload_bytes_copied,payload_bytes_zero_copy,"
    "payload_bytes_stashed,packets_in_order,packets_out_of_order,ordered_ratio,"
    "decrypt_failures,retransmissions,packets_sent,packets_delivered,checksum,verified";

struct SimulateRow {
  std::string mode;
  std::uint64_t bytes_transferred = 0;
  std::uint32_t streams = 0;
  std::uint64_t seed = 0;
  double reorder_prob = 0;
  std::uint32_t reorder_depth = 0;
  double loss_prob = 0;
  double duplicate_prob = 0;
  double wall_time_s = 0;
  double throughput_MBps = 0;
  std::uint64_t payload_bytes_copied = 0;
  std::uint64_t payload_bytes_zero_copy = 0;
  std::uint64_t payload_bytes_stashed = 0;
  std::uint64_t packets_in_order = 0;
  std::uint64_t packets_out_of_order = 0;
  double ordered_ratio = 0;
  std::uint64_t decrypt_failures = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t checksum = 0;
  bool verified = false;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool number(std::string_view s, T* out, int base = 10) {
  if (s.empty()) return false;
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>) {
    r = std::from_chars(s.data(), s.data() + s.size(), *out);
  } else {
    r = std::from_chars(s.data(), s.data() + s.size(), *out, base);
  }
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline bool plain_field(std::string_view s) {
  return !s.empty() && s.find_first_of(",\"\n") == std::string_view::npos;
}

}  // namespace detail

inline std::string format(const BenchRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%" PRIu64 ",%.1f,%.1f,%.1f,%.3f,%" PRIu64 ",%" PRIu64 ",%.4f",
                r.mode.c_str(), r.scenario.c_str(), r.bytes, r.median_ns, r.p5_ns, r.p95_ns,
                r.throughput_MBps, r.copied_bytes, r.zero_copy_bytes, r.improvement);
  return buf;
}

inline std::optional<BenchRow> parse_bench(std::string_view line) {
  const auto f = detail::split(line);
  if (f.size() != 10) return std::nullopt;
  BenchRow r;
  if (!detail::plain_field(f[0]) || !detail::plain_field(f[1])) return std::nullopt;
  r.mode = f[0];
  r.scenario = f[1];
  if (!detail::number(f[2], &r.bytes) || !detail::number(f[3], &r.median_ns) ||
      !detail::number(f[4], &r.p5_ns) || !detail::number(f[5], &r.p95_ns) ||
      !detail::number(f[6], &r.throughput_MBps) || !detail::number(f[7], &r.copied_bytes) ||
      !detail::number(f[8], &r.zero_copy_bytes) || !detail::number(f[9], &r.improvement)) {
    return std::nullopt;
  }
  return r;
}

inline std::string format(const SimulateRow& r) {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "%s,%" PRIu64 ",%u,%" PRIu64 ",%.6f,%u,%.6f,%.6f,%.6f,%.3f,%" PRIu64 ",%" PRIu64
                ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%.9f,%" PRIu64 ",%" PRIu64 ",%" PRIu64
                ",%" PRIu64 ",%016" PRIx64 ",%d",
                r.mode.c_str(), r.bytes_transferred, r.streams, r.seed, r.reorder_prob,
                r.reorder_depth, r.loss_prob, r.duplicate_prob, r.wall_time_s, r.throughput_MBps,
                r.payload_bytes_copied, r.payload_bytes_zero_copy, r.payload_bytes_stashed,
                r.packets_in_order, r.packets_out_of_order, r.ordered_ratio, r.decrypt_failures,
                r.retransmissions, r.packets_sent, r.packets_delivered, r.checksum,
                r.verified ? 1 : 0);
  return buf;
}

inline std::optional<SimulateRow> parse_simulate(std::string_view line) {
  const auto f = detail::split(line);
  if (f.size() != 22) return std::nullopt;
  SimulateRow r;
  if (!detail::plain_field(f[0])) return std::nullopt;
  r.mode = f[0];
  int verified = 0;
  using detail::number;
  if (!number(f[1], &r.bytes_transferred) || !number(f[2], &r.streams) ||
      !number(f[3], &r.seed) || !number(f[4], &r.reorder_prob) ||
      !number(f[5], &r.reorder_depth) || !number(f[6], &r.loss_prob) ||
      !number(f[7], &r.duplicate_prob) || !number(f[8], &r.wall_time_s) ||
      !number(f[9], &r.throughput_MBps) || !number(f[10], &r.payload_bytes_copied) ||
      !number(f[11], &r.payload_bytes_zero_copy) || !number(f[12], &r.payload_bytes_stashed) ||
      !number(f[13], &r.packets_in_order) || !number(f[14], &r.packets_out_of_order) ||
      !number(f[15], &r.ordered_ratio) || !number(f[16], &r.decrypt_failures) ||
      !number(f[17], &r.retransmissions) || !number(f[18], &r.packets_sent) ||
      !number(f[19], &r.packets_delivered) || f[20].size() != 16 ||
      !number(f[20], &r.checksum, 16) || !number(f[21], &verified) ||
      (verified != 0 && verified != 1)) {
    return std::nullopt;
  }
  r.verified = verified == 1;
  return r;
}

}  // namespace reverso::csv
