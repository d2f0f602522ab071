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

#include "reverso/stream_buf.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>

#include "reverso/error.hpp"
#include "reverso/types.hpp"

namespace reverso::stream {

namespace {
std::atomic<std::uint64_t> g_allocations{0};

std::unique_ptr<std::uint8_t[]> allocate_storage(std::size_t n) {
  g_allocations.fetch_add(1, std::memory_order_relaxed);
  return std::unique_ptr<std::uint8_t[]>(new std::uint8_t[n]);
}
}  // namespace

// OooStash

OooStash::InsertResult OooStash::insert(std::uint64_t floor, std::uint64_t offset,
                                        std::span<const std::uint8_t> data) {
  InsertResult result;
  const std::uint64_t end = offset + data.size();
  std::uint64_t cur = std::max(offset, floor);
  if (cur >= end) return result;

  auto it = entries_.upper_bound(cur);
  if (it != entries_.begin()) {
    const auto prev = std::prev(it);
    cur = std::max<std::uint64_t>(cur, prev->first + prev->second.size());
  }

  // Collect the missing pieces first so a drop leaves the stash untouched.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pieces;
  std::size_t missing = 0;
  while (cur < end) {
    std::uint64_t piece_end = end;
    if (it != entries_.end() && it->first < piece_end) piece_end = it->first;
    if (piece_end > cur) {
      pieces.emplace_back(cur, piece_end);
      missing += static_cast<std::size_t>(piece_end - cur);
    }
    if (it == entries_.end()) break;
    cur = std::max<std::uint64_t>(cur, it->first + it->second.size());
    ++it;
  }
  if (bytes_ + missing > kMaxStashBytes) {
    result.dropped = true;
    return result;
  }
  for (const auto& [from, to] : pieces) {
    const auto first = data.begin() + static_cast<std::ptrdiff_t>(from - offset);
    const auto last = data.begin() + static_cast<std::ptrdiff_t>(to - offset);
    entries_.emplace(from, std::vector<std::uint8_t>(first, last));
  }
  bytes_ += missing;
  result.copied = missing;
  return result;
}

std::uint64_t OooStash::end_offset() const noexcept {
  if (entries_.empty()) return 0;
  const auto& last = *entries_.rbegin();
  return last.first + last.second.size();
}

std::pair<std::uint64_t, std::vector<std::uint8_t>> OooStash::pop_front() {
  auto node = entries_.extract(entries_.begin());
  bytes_ -= node.mapped().size();
  return {node.key(), std::move(node.mapped())};
}

void OooStash::clear() noexcept {
  entries_.clear();
  bytes_ = 0;
}

// StreamRecvBuffer

StreamRecvBuffer::StreamRecvBuffer(std::size_t capacity)
    : storage_(allocate_storage(capacity)), capacity_(capacity) {
  if (capacity == 0 || capacity > kMaxCapacity) {
    throw Error(ErrorCode::kInvalidArgument, "buffer capacity");
  }
}

std::uint64_t StreamRecvBuffer::allocation_count() noexcept {
  return g_allocations.load(std::memory_order_relaxed);
}

std::span<std::uint8_t> StreamRecvBuffer::reserve_slow(std::size_t n) {
  std::size_t pos = contiguous_position();
  {
    const std::size_t keep = static_cast<std::size_t>(contiguous_ - consumed_);
    const std::size_t from = static_cast<std::size_t>(consumed_ - base_);
    const std::size_t needed = keep + n;
    if (needed <= capacity_) {
      std::memmove(storage_.get(), storage_.get() + from, keep);
    } else {
      std::size_t cap = capacity_;
      while (cap < needed) cap *= 2;
      if (cap > kMaxCapacity) throw Error(ErrorCode::kBufferLimit);
      auto grown = allocate_storage(cap);
      std::memcpy(grown.get(), storage_.get() + from, keep);
      storage_ = std::move(grown);
      capacity_ = cap;
    }
    relocated_ += keep;
    base_ = consumed_;
    pos = keep;
    scratch_end_ = pos;
  }
  return {storage_.get() + pos, capacity_ - pos};
}

void StreamRecvBuffer::check_final_size(std::uint64_t end) const {
  if (fin_ && end > *fin_) throw Error(ErrorCode::kFinalSize, "data past final size");
}

void StreamRecvBuffer::set_fin(std::uint64_t final_size) {
  if (fin_ && *fin_ != final_size) throw Error(ErrorCode::kFinalSize, "final size changed");
  if (highest_seen_ > final_size) throw Error(ErrorCode::kFinalSize, "final size below data");
  fin_ = final_size;
}

std::size_t StreamRecvBuffer::drain_stash() {
  std::size_t copied = 0;
  while (!stash_.empty() && stash_.front_offset() <= contiguous_) {
    auto [offset, bytes] = stash_.pop_front();
    const std::uint64_t end = offset + bytes.size();
    if (end <= contiguous_) continue;
    const std::size_t skip = static_cast<std::size_t>(contiguous_ - offset);
    const std::size_t n = bytes.size() - skip;
    auto dest = reserve_at_contiguous(n);
    std::memcpy(dest.data(), bytes.data() + skip, n);
    contiguous_ += n;
    copied += n;
  }
  return copied;
}

std::size_t StreamRecvBuffer::commit_slow(std::size_t data_len, bool fin,
                                          std::size_t footer_len) {
  const std::uint64_t end = contiguous_ + data_len;
  check_final_size(end);
  highest_seen_ = std::max(highest_seen_, end);
  if (fin) set_fin(end);
  scratch_end_ = contiguous_position() + data_len + footer_len;
  contiguous_ = end;
  return drain_stash();
}

StreamRecvBuffer::DeliverResult StreamRecvBuffer::deliver_copy(
    std::uint64_t offset, std::span<const std::uint8_t> data, bool fin) {
  DeliverResult result;
  const std::uint64_t end = offset + data.size();
  check_final_size(end);
  highest_seen_ = std::max(highest_seen_, end);
  if (fin) set_fin(end);
  if (end <= contiguous_) return result;

  if (offset <= contiguous_) {
    const std::size_t skip = static_cast<std::size_t>(contiguous_ - offset);
    const std::size_t n = data.size() - skip;
    auto dest = reserve_at_contiguous(n);
    std::memcpy(dest.data(), data.data() + skip, n);
    contiguous_ += n;
    scratch_end_ = contiguous_position();
    result.copied = n + drain_stash();
    return result;
  }
  const auto ins = stash_.insert(contiguous_, offset, data);
  result.stashed = ins.copied;
  result.dropped = ins.dropped;
  return result;
}

std::span<const std::uint8_t> StreamRecvBuffer::readable_span() const noexcept {
  return {storage_.get() + (consumed_ - base_),
          static_cast<std::size_t>(contiguous_ - consumed_)};
}

void StreamRecvBuffer::consume(std::size_t n) {
  if (n > contiguous_ - consumed_) throw Error(ErrorCode::kConsumeOutOfRange);
  consumed_ += n;
  if (consumed_ == contiguous_) {
    base_ = contiguous_;
    scratch_end_ = 0;
  }
}

void StreamRecvBuffer::reset() noexcept {
  base_ = contiguous_ = consumed_ = highest_seen_ = 0;
  scratch_end_ = 0;
  fin_.reset();
  stash_.clear();
}

// AppRecvBufMap

const char* plan_name(PlanKind kind) noexcept {
  switch (kind) {
    case PlanKind::kZeroCopy: return "ZeroCopy";
    case PlanKind::kInPlaceSuspicious: return "InPlaceSuspicious";
    case PlanKind::kInPlaceOutOfOrder: return "InPlaceOutOfOrder";
    case PlanKind::kControlOnly: return "ControlOnly";
  }
  return "?";
}

AppRecvBufMap::AppRecvBufMap(std::size_t default_capacity)
    : spare_(std::make_unique<StreamRecvBuffer>(default_capacity)),
      default_capacity_(default_capacity) {}

StreamRecvBuffer* AppRecvBufMap::find_slow(std::uint64_t stream_id) noexcept {
  auto it = buffers_.find(stream_id);
  if (it == buffers_.end()) return nullptr;
  hot_id_ = stream_id;
  hot_ = it->second.get();
  return hot_;
}

std::uint64_t AppRecvBufMap::contiguous_offset(std::uint64_t stream_id) const noexcept {
  const auto* b = find(stream_id);
  return b ? b->contiguous_offset() : 0;
}

StreamRecvBuffer& AppRecvBufMap::get_or_create(std::uint64_t stream_id) {
  if (stream_id == 0 || stream_id >= kStreamIdLimit) {
    throw Error(ErrorCode::kProtocolViolation, "invalid stream id");
  }
  if (auto* b = find(stream_id)) return *b;
  auto& slot = buffers_[stream_id];
  slot = std::make_unique<StreamRecvBuffer>(default_capacity_);
  return *slot;
}

bool AppRecvBufMap::bind_spare(std::uint64_t stream_id) {
  if (find(stream_id) != nullptr) return false;
  buffers_.emplace(stream_id, std::move(spare_));
  return true;
}

void AppRecvBufMap::take_or_recycle(std::uint64_t stream_id, bool success) {
  auto it = buffers_.find(stream_id);
  if (it == buffers_.end() || spare_) return;
  if (success) {
    spare_ = std::make_unique<StreamRecvBuffer>(default_capacity_);
  } else {
    spare_ = std::move(it->second);
    spare_->reset();
    if (hot_id_ == stream_id) hot_ = nullptr;
    buffers_.erase(it);
  }
}

Plan AppRecvBufMap::decryption_plan(std::uint64_t stream_id, std::uint64_t header_offset,
                                    std::size_t ciphertext_len) {
  if (stream_id >= kStreamIdLimit) throw Error(ErrorCode::kProtocolViolation);
  Plan plan;
  if (stream_id == 0) return plan;
  plan.buffer = find(stream_id);
  if (plan.buffer == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "stream has no bound buffer");
  }
  const std::uint64_t contiguous = plan.buffer->contiguous_offset();
  if (header_offset == contiguous) {
    plan.kind = PlanKind::kZeroCopy;
    const std::size_t pt_len =
        ciphertext_len > kAeadTagLen ? ciphertext_len - kAeadTagLen : 0;
    plan.destination = plan.buffer->reserve_at_contiguous(pt_len).first(pt_len);
  } else if (header_offset < contiguous) {
    plan.kind = PlanKind::kInPlaceSuspicious;
  } else {
    plan.kind = PlanKind::kInPlaceOutOfOrder;
  }
  return plan;
}

std::vector<std::uint64_t> AppRecvBufMap::stream_ids() const {
  std::vector<std::uint64_t> ids;
  ids.reserve(buffers_.size());
  for (const auto& [id, _] : buffers_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace reverso::stream
