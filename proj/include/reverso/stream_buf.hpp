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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

// Application-owned receive buffers.
//
// Each stream owns one contiguous region. Validated in-order bytes occupy
// [consumed, contiguous) and are handed to the application as a view. In
// Reverso mode the next in-order packet is decrypted straight to the
// contiguous watermark, so its data lands where the previous packet's
// footer was. Fragments beyond the watermark wait in a stash and are copied
// in once the gap closes.

namespace reverso::stream {

inline constexpr std::size_t kDefaultCapacity = std::size_t{1} << 20;
inline constexpr std::size_t kMaxCapacity = std::size_t{1} << 30;
inline constexpr std::size_t kMaxStashBytes = std::size_t{16} << 20;

/// Validated out-of-order fragments, disjoint, keyed by stream offset.
class OooStash {
 public:
  struct InsertResult {
    std::size_t copied = 0;
    bool dropped = false;
  };

  /// Copies the parts of [offset, offset + data.size()) that are at or above
  /// `floor` and not already held.
  InsertResult insert(std::uint64_t floor, std::uint64_t offset,
                      std::span<const std::uint8_t> data);

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t bytes() const noexcept { return bytes_; }
  std::size_t fragments() const noexcept { return entries_.size(); }
  std::uint64_t front_offset() const noexcept { return entries_.begin()->first; }
  std::uint64_t end_offset() const noexcept;

  /// Removes and returns the first fragment.
  std::pair<std::uint64_t, std::vector<std::uint8_t>> pop_front();
  void clear() noexcept;

 private:
  std::map<std::uint64_t, std::vector<std::uint8_t>> entries_;
  std::size_t bytes_ = 0;
};

class StreamRecvBuffer {
 public:
  explicit StreamRecvBuffer(std::size_t capacity = kDefaultCapacity);

  std::uint64_t base_offset() const noexcept { return base_; }
  std::uint64_t contiguous_offset() const noexcept { return contiguous_; }
  std::uint64_t consumed_offset() const noexcept { return consumed_; }
  std::optional<std::uint64_t> fin_offset() const noexcept { return fin_; }
  std::size_t scratch_end() const noexcept { return scratch_end_; }
  std::size_t capacity() const noexcept { return capacity_; }
  const OooStash& stash() const noexcept { return stash_; }

  /// Writable storage starting at the contiguous watermark, at least `n`
  /// bytes long. May grow the storage (relocating unconsumed bytes).
  std::span<std::uint8_t> reserve_at_contiguous(std::size_t n) {
    const std::size_t pos = contiguous_position();
    if (pos <= capacity_ && n <= capacity_ - pos) return {storage_.get() + pos, capacity_ - pos};
    return reserve_slow(n);
  }

  /// Storage position of the contiguous watermark.
  std::size_t contiguous_position() const noexcept {
    return static_cast<std::size_t>(contiguous_ - base_);
  }

  /// Accepts `data_len` bytes already decrypted at the contiguous position,
  /// followed by `footer_len` bytes of scratch. Returns bytes copied in from
  /// the stash.
  std::size_t commit_zero_copy(std::size_t data_len, bool fin,
                               std::size_t footer_len) {
    if (fin || fin_ || !stash_.empty()) return commit_slow(data_len, fin, footer_len);
    const std::uint64_t end = contiguous_ + data_len;
    highest_seen_ = std::max(highest_seen_, end);
    scratch_end_ = contiguous_position() + data_len + footer_len;
    contiguous_ = end;
    return 0;
  }

  struct DeliverResult {
    std::size_t copied = 0;   // written into storage by memcpy
    std::size_t stashed = 0;  // copied into the stash
    bool dropped = false;     // stash limit hit; fragment discarded
  };

  /// Copy path for validated data (in-place decryptions, Baseline mode,
  /// multiplexed frames). Bytes below the watermark are discarded.
  DeliverResult deliver_copy(std::uint64_t offset,
                             std::span<const std::uint8_t> data, bool fin);

  std::span<const std::uint8_t> readable_span() const noexcept;
  bool fin_reached() const noexcept { return fin_ && *fin_ == contiguous_; }
  void consume(std::size_t n);

  /// Bytes moved by storage growth so far.
  std::size_t relocated_bytes() const noexcept { return relocated_; }

  /// Returns the buffer to its freshly constructed state without freeing
  /// storage.
  void reset() noexcept;

  /// Process-wide count of storage allocations (construction and growth).
  static std::uint64_t allocation_count() noexcept;

 private:
  std::span<std::uint8_t> reserve_slow(std::size_t n);
  std::size_t commit_slow(std::size_t data_len, bool fin, std::size_t footer_len);
  void set_fin(std::uint64_t final_size);
  void check_final_size(std::uint64_t end) const;
  std::size_t drain_stash();

  std::unique_ptr<std::uint8_t[]> storage_;
  std::size_t capacity_;
  std::uint64_t base_ = 0;
  std::uint64_t contiguous_ = 0;
  std::uint64_t consumed_ = 0;
  std::uint64_t highest_seen_ = 0;
  std::size_t scratch_end_ = 0;
  std::size_t relocated_ = 0;
  std::optional<std::uint64_t> fin_;
  OooStash stash_;
};

enum class PlanKind { kZeroCopy, kInPlaceSuspicious, kInPlaceOutOfOrder, kControlOnly };

const char* plan_name(PlanKind kind) noexcept;

struct Plan {
  PlanKind kind = PlanKind::kControlOnly;
  StreamRecvBuffer* buffer = nullptr;
  // Zero-copy destination; empty for in-place plans.
  std::span<std::uint8_t> destination;
};

class AppRecvBufMap {
 public:
  explicit AppRecvBufMap(std::size_t default_capacity = kDefaultCapacity);

  StreamRecvBuffer* find(std::uint64_t stream_id) noexcept {
    if (hot_ != nullptr && hot_id_ == stream_id) return hot_;
    return find_slow(stream_id);
  }
  const StreamRecvBuffer* find(std::uint64_t stream_id) const noexcept {
    return const_cast<AppRecvBufMap*>(this)->find(stream_id);
  }

  /// Highest contiguous offset, 0 for unknown streams.
  std::uint64_t contiguous_offset(std::uint64_t stream_id) const noexcept;

  /// Post-authentication lookup that may allocate.
  StreamRecvBuffer& get_or_create(std::uint64_t stream_id);

  /// Binds the spare buffer to an unknown stream before decryption. Returns
  /// true when the binding is fresh and must later be settled.
  bool bind_spare(std::uint64_t stream_id);

  /// Settles a fresh binding: keeps it and allocates a new spare on
  /// success; on failure returns the buffer, reset, to the spare slot.
  void take_or_recycle(std::uint64_t stream_id, bool success);

  Plan decryption_plan(std::uint64_t stream_id, std::uint64_t header_offset,
                       std::size_t ciphertext_len);

  std::size_t default_capacity() const noexcept { return default_capacity_; }
  std::size_t size() const noexcept { return buffers_.size(); }
  bool has_spare() const noexcept { return spare_ != nullptr; }
  const StreamRecvBuffer* spare() const noexcept { return spare_.get(); }
  std::vector<std::uint64_t> stream_ids() const;

 private:
  StreamRecvBuffer* find_slow(std::uint64_t stream_id) noexcept;

  std::unordered_map<std::uint64_t, std::unique_ptr<StreamRecvBuffer>> buffers_;
  std::unique_ptr<StreamRecvBuffer> spare_;
  std::size_t default_capacity_;
  // Last looked-up stream; buffers never move once owned.
  std::uint64_t hot_id_ = 0;
  StreamRecvBuffer* hot_ = nullptr;
};

}  // namespace reverso::stream
