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
#include <cstdint>
#include <iterator>
#include <map>

namespace reverso::detail {

// Disjoint, merged half-open intervals [start, end).
class IntervalSet {
 public:
  using Map = std::map<std::uint64_t, std::uint64_t>;

  void insert(std::uint64_t start, std::uint64_t end) {
    if (start >= end) return;
    auto it = map_.upper_bound(start);
    if (it != map_.begin()) {
      auto prev = std::prev(it);
      if (prev->second >= start) {
        start = prev->first;
        end = std::max(end, prev->second);
        it = map_.erase(prev);
      }
    }
    while (it != map_.end() && it->first <= end) {
      end = std::max(end, it->second);
      it = map_.erase(it);
    }
    map_.emplace(start, end);
  }

  bool contains(std::uint64_t x) const {
    auto it = map_.upper_bound(x);
    if (it == map_.begin()) return false;
    return std::prev(it)->second > x;
  }

  /// End of the interval starting at `origin`, or `origin` if none does.
  std::uint64_t prefix_end(std::uint64_t origin) const {
    auto it = map_.upper_bound(origin);
    if (it == map_.begin()) return origin;
    --it;
    return it->second > origin ? it->second : origin;
  }

  /// Keeps only the `n` highest intervals.
  void keep_highest(std::size_t n) {
    while (map_.size() > n) map_.erase(map_.begin());
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& intervals() const { return map_; }

 private:
  Map map_;
};

}  // namespace reverso::detail
