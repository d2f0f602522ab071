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

#include <cstring>

#include "reverso/error.hpp"
#include "reverso/stream_buf.hpp"
#include "testkit.hpp"

namespace {

using namespace reverso;
using namespace reverso::stream;
using testkit::Bytes;

// Writes `n` bytes at the contiguous position the way a decryption would.
std::size_t write_and_commit(StreamRecvBuffer& b, const Bytes& data, std::size_t footer = 0,
                             bool fin = false) {
  auto dest = b.reserve_at_contiguous(data.size() + footer);
  std::memcpy(dest.data(), data.data(), data.size());
  return b.commit_zero_copy(data.size(), fin, footer);
}

TEST(StreamBuffer, ZeroCopyCommit) {
  StreamRecvBuffer b(4096);
  write_and_commit(b, Bytes(100, 1));
  EXPECT_EQ(b.contiguous_offset(), 100u);
  EXPECT_EQ(write_and_commit(b, Bytes(1200, 2)), 0u);
  EXPECT_EQ(b.contiguous_offset(), 1300u);
  EXPECT_EQ(b.readable_span().size(), 1300u);
}

TEST(StreamBuffer, CommitDrainsStash) {
  StreamRecvBuffer b(4096);
  write_and_commit(b, Bytes(100, 1));
  const Bytes late(500, 9);
  const auto r = b.deliver_copy(1300, late, false);
  EXPECT_EQ(r.stashed, 500u);
  EXPECT_EQ(r.copied, 0u);
  EXPECT_EQ(b.contiguous_offset(), 100u);
  EXPECT_EQ(write_and_commit(b, Bytes(1200, 2)), 500u);
  EXPECT_EQ(b.contiguous_offset(), 1800u);
  EXPECT_TRUE(b.stash().empty());
  EXPECT_EQ(b.readable_span()[1799], 9);
}

TEST(StreamBuffer, NextDestinationStartsAtPreviousFooter) {
  StreamRecvBuffer b(8192);
  auto first = b.reserve_at_contiguous(1300);
  const std::uint8_t* footer = first.data() + 1200;
  b.commit_zero_copy(1200, false, 100);
  EXPECT_EQ(b.scratch_end(), 1300u);
  auto second = b.reserve_at_contiguous(1300);
  EXPECT_EQ(second.data(), footer);
}

TEST(StreamBuffer, StashDuplicatesAndTrimming) {
  StreamRecvBuffer b(4096);
  write_and_commit(b, Bytes(100, 1));
  EXPECT_EQ(b.deliver_copy(200, Bytes(50, 3), false).stashed, 50u);
  EXPECT_EQ(b.deliver_copy(200, Bytes(50, 3), false).stashed, 0u);
  EXPECT_EQ(b.deliver_copy(220, Bytes(60, 3), false).stashed, 30u);
  // Overlaps the contiguous region: only the tail is new.
  const auto r = b.deliver_copy(50, Bytes(100, 4), false);
  EXPECT_EQ(r.copied, 50u);
  EXPECT_EQ(b.contiguous_offset(), 150u);
  // Entirely below contiguous.
  EXPECT_EQ(b.deliver_copy(0, Bytes(100, 4), false).copied, 0u);
}

TEST(OooStash, DisjointInsertCopiesAll) {
  OooStash s;
  EXPECT_EQ(s.insert(0, 10, Bytes(40, 1)).copied, 40u);
  EXPECT_EQ(s.insert(0, 100, Bytes(40, 1)).copied, 40u);
  EXPECT_EQ(s.insert(0, 0, Bytes(200, 1)).copied, 120u);
  EXPECT_EQ(s.bytes(), 200u);
  EXPECT_EQ(s.insert(120, 0, Bytes(200, 1)).copied, 0u);
}

TEST(OooStash, LimitDropsWithoutPartialInsert) {
  OooStash s;
  EXPECT_FALSE(s.insert(0, 0, Bytes(kMaxStashBytes - 10, 0)).dropped);
  const auto r = s.insert(0, kMaxStashBytes, Bytes(20, 0));
  EXPECT_TRUE(r.dropped);
  EXPECT_EQ(r.copied, 0u);
  EXPECT_EQ(s.fragments(), 1u);
}

TEST(StreamBuffer, ReadableSpanAndConsume) {
  StreamRecvBuffer b(4096);
  EXPECT_TRUE(b.readable_span().empty());
  write_and_commit(b, Bytes(1200, 5));
  EXPECT_EQ(b.readable_span().size(), 1200u);
  b.consume(200);
  EXPECT_EQ(b.readable_span().size(), 1000u);
  EXPECT_THROW(b.consume(1001), Error);
  b.consume(1000);
  EXPECT_TRUE(b.readable_span().empty());
  EXPECT_EQ(b.base_offset(), 1200u);
}

TEST(StreamBuffer, RelocatesAndGrowsKeepingUnconsumedBytes) {
  StreamRecvBuffer b(2048);
  testkit::Gen g(1);
  Bytes all;
  for (int i = 0; i < 10; ++i) {
    const Bytes d = g.bytes(700);
    write_and_commit(b, d, 30);
    all.insert(all.end(), d.begin(), d.end());
  }
  const auto view = b.readable_span();
  ASSERT_EQ(view.size(), all.size());
  EXPECT_TRUE(std::equal(view.begin(), view.end(), all.begin()));
  EXPECT_GE(b.capacity(), 7000u);
  EXPECT_GT(b.relocated_bytes(), 0u);
}

TEST(StreamBuffer, ReadableBytesStableAcrossLaterWrites) {
  StreamRecvBuffer b(1 << 16);
  testkit::Gen g(2);
  Bytes expect;
  for (int i = 0; i < 40; ++i) {
    // Mix in-order commits, stashed fragments and duplicates.
    const Bytes d = g.bytes(1 + g.below(1200));
    if (g.coin(0.3)) {
      b.deliver_copy(b.contiguous_offset() + 50 + g.below(500), d, false);
    } else {
      write_and_commit(b, d, g.below(60));
    }
    const auto view = b.readable_span();
    const Bytes prefix(view.begin(), view.begin() + static_cast<std::ptrdiff_t>(expect.size()));
    ASSERT_EQ(prefix, expect);
    expect.assign(view.begin(), view.end());
  }
}

TEST(StreamBuffer, FinalSizeRules) {
  StreamRecvBuffer b(4096);
  write_and_commit(b, Bytes(10, 1), 0, true);
  EXPECT_TRUE(b.fin_reached());
  EXPECT_EQ(b.fin_offset(), 10u);
  EXPECT_THROW(b.deliver_copy(5, Bytes(10, 1), false), Error);
  EXPECT_THROW(b.deliver_copy(0, Bytes(8, 1), true), Error);
  EXPECT_NO_THROW(b.deliver_copy(0, Bytes(10, 1), true));
}

TEST(Plan, ClassifiesByHeaderOffset) {
  AppRecvBufMap map(8192);
  auto& b = map.get_or_create(1);
  write_and_commit(b, Bytes(100, 1));
  auto p = map.decryption_plan(1, 100, 1216);
  EXPECT_EQ(p.kind, PlanKind::kZeroCopy);
  EXPECT_EQ(p.destination.data(), b.readable_span().data() + 100);
  EXPECT_EQ(p.destination.size(), 1200u);
  write_and_commit(b, Bytes(1200, 1));
  EXPECT_EQ(map.decryption_plan(1, 2400, 500).kind, PlanKind::kInPlaceOutOfOrder);
  EXPECT_EQ(map.decryption_plan(1, 0, 500).kind, PlanKind::kInPlaceSuspicious);
  EXPECT_EQ(map.decryption_plan(0, 0, 500).kind, PlanKind::kControlOnly);
  EXPECT_THROW(map.decryption_plan(2, 0, 500), Error);
}

TEST(AppRecvBufMap, FailedFreshStreamLeavesMapUnchanged) {
  AppRecvBufMap map(4096);
  const auto* spare = map.spare();
  ASSERT_TRUE(map.bind_spare(7));
  EXPECT_FALSE(map.has_spare());
  map.take_or_recycle(7, false);
  EXPECT_EQ(map.size(), 0u);
  EXPECT_TRUE(map.has_spare());
  EXPECT_EQ(map.spare(), spare);
}

TEST(AppRecvBufMap, SuccessfulFreshStreamGetsNewSpare) {
  AppRecvBufMap map(4096);
  const auto* spare = map.spare();
  ASSERT_TRUE(map.bind_spare(7));
  map.take_or_recycle(7, true);
  EXPECT_EQ(map.size(), 1u);
  EXPECT_EQ(map.find(7), spare);
  EXPECT_TRUE(map.has_spare());
  EXPECT_NE(map.spare(), spare);
  EXPECT_FALSE(map.bind_spare(7));
}

TEST(AppRecvBufMap, FailedFreshStreamsDoNotAllocate) {
  AppRecvBufMap map(4096);
  map.bind_spare(1);
  map.take_or_recycle(1, false);
  const auto before = StreamRecvBuffer::allocation_count();
  for (std::uint64_t sid = 2; sid < 102; ++sid) {
    map.bind_spare(sid);
    map.take_or_recycle(sid, false);
  }
  EXPECT_EQ(StreamRecvBuffer::allocation_count(), before);
  EXPECT_EQ(map.size(), 0u);
}

TEST(AppRecvBufMap, RejectsReservedStreamIds) {
  AppRecvBufMap map(4096);
  EXPECT_THROW(map.get_or_create(0), Error);
  EXPECT_THROW(map.get_or_create(kStreamIdLimit), Error);
}

}  // namespace
