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

#include <gtest/gtest.h>

#include <random>

#include "csv_report.hpp"

namespace {

using namespace reverso::csv;

std::size_t columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

TEST(Csv, BenchRowRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ns(100.0, 1e7);
  for (int i = 0; i < 1000; ++i) {
    BenchRow r;
    r.mode = i % 2 ? "reverso" : "baseline";
    r.scenario = "batch_" + std::to_string(i);
    r.bytes = rng() >> 20;
    // Values already at the printed precision survive exactly.
    r.median_ns = std::round(ns(rng) * 10) / 10;
    r.p5_ns = std::round(ns(rng) * 10) / 10;
    r.p95_ns = std::round(ns(rng) * 10) / 10;
    r.throughput_MBps = std::round(ns(rng)) / 1000;
    r.copied_bytes = rng() >> 8;
    r.zero_copy_bytes = rng() >> 8;
    r.improvement = std::round((ns(rng) - 5e6) / 100) / 1e4;
    const std::string line = format(r);
    EXPECT_EQ(columns(line), columns(kBenchHeader));
    const auto back = parse_bench(line);
    ASSERT_TRUE(back.has_value()) << line;
    EXPECT_EQ(format(*back), line);
    EXPECT_EQ(back->bytes, r.bytes);
    EXPECT_EQ(back->copied_bytes, r.copied_bytes);
    EXPECT_DOUBLE_EQ(back->median_ns, r.median_ns);
  }
}

TEST(Csv, SimulateRowRoundTrip) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    SimulateRow r;
    r.mode = i % 2 ? "reverso" : "baseline";
    r.bytes_transferred = rng() >> 16;
    r.streams = static_cast<std::uint32_t>(rng() % 100 + 1);
    r.seed = rng();
    r.reorder_prob = static_cast<double>(rng() % 1000000) / 1e6;
    r.reorder_depth = static_cast<std::uint32_t>(rng() % 10 + 1);
    r.loss_prob = static_cast<double>(rng() % 1000000) / 1e6;
    r.duplicate_prob = static_cast<double>(rng() % 1000000) / 1e6;
    r.wall_time_s = static_cast<double>(rng() % 1000000) / 1e6;
    r.throughput_MBps = static_cast<double>(rng() % 1000000) / 1e3;
    r.payload_bytes_copied = rng() >> 16;
    r.payload_bytes_zero_copy = rng() >> 16;
    r.payload_bytes_stashed = rng() >> 16;
    r.packets_in_order = rng() >> 40;
    r.packets_out_of_order = rng() >> 40;
    r.ordered_ratio = static_cast<double>(rng() % 1000000000) / 1e9;
    r.decrypt_failures = rng() >> 50;
    r.retransmissions = rng() >> 50;
    r.packets_sent = rng() >> 40;
    r.packets_delivered = rng() >> 40;
    r.checksum = rng();
    r.verified = (rng() & 1) != 0;
    const std::string line = format(r);
    EXPECT_EQ(columns(line), columns(kSimulateHeader));
    const auto back = parse_simulate(line);
    ASSERT_TRUE(back.has_value()) << line;
    EXPECT_EQ(format(*back), line);
    EXPECT_EQ(back->checksum, r.checksum);
    EXPECT_EQ(back->seed, r.seed);
    EXPECT_EQ(back->verified, r.verified);
  }
}

TEST(Csv, RejectsMalformedRows) {
  EXPECT_FALSE(parse_bench("").has_value());
  EXPECT_FALSE(parse_bench("reverso,batch_10,1,2,3").has_value());
  EXPECT_FALSE(parse_bench("reverso,batch_10,x,1,1,1,1,1,1,0").has_value());
  EXPECT_FALSE(parse_simulate(kSimulateHeader).has_value());
}

}  // namespace
