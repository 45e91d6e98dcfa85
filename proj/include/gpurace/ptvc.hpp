/*
 * Copyright 2026 The gpurace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GPURACE_PTVC_HPP
#define GPURACE_PTVC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gpurace/trace.hpp"
#include "gpurace/vclock.hpp"

namespace gpurace {

struct CompressionCounts {
  std::size_t blockCompressed = 0;
  std::size_t blockExpanded = 0;
  std::size_t warpCompressed = 0;  // only warps materialized inside expanded blocks
  std::size_t warpExpanded = 0;
  std::size_t entries = 0;         // materialized integers

  CompressionCounts& operator+=(const CompressionCounts& o);
};

// Per-thread vector clock stored along the block -> warp -> lane hierarchy.
//
// A block is either one common time for all its threads or an array of warp
// clocks; a warp is either one common time or a sorted lane -> time list with
// zero entries omitted. Writes expand only the path to the touched lane;
// joins try to fold uniform warps and blocks back into a single time.
class CompressedPTVC {
 public:
  struct WarpVC {
    bool expanded = false;
    Time time = 0;
    std::vector<std::pair<std::uint32_t, Time>> lanes;  // sorted by lane, no zeros

    bool operator==(const WarpVC&) const = default;
  };

  struct BlockVC {
    bool expanded = false;
    Time time = 0;
    std::vector<WarpVC> warps;

    bool operator==(const BlockVC&) const = default;
  };

  CompressedPTVC() = default;
  explicit CompressedPTVC(const GridShape& g) : shape_(g), blocks_(g.blocks) {}

  static CompressedPTVC zero(const GridShape& g) { return CompressedPTVC(g); }

  const GridShape& shape() const { return shape_; }
  std::size_t width() const { return shape_.thread_count(); }

  Time get(std::uint32_t flat) const;
  Time get(const ThreadId& t) const;
  void set(std::uint32_t flat, Time v);
  void set(const ThreadId& t, Time v) { set(shape_.flat(t), v); }

  // Sets every thread of a block (or warp) to one time, stored compressed.
  void set_block(std::uint32_t block, Time v);
  void set_warp(std::uint32_t block, std::uint32_t warp, Time v);

  void join(const CompressedPTVC& o);
  bool leq(const CompressedPTVC& o) const;

  // Folds uniform warps and blocks; joins call this on the blocks they touch.
  void recompress();

  VectorClock dense() const;
  static CompressedPTVC from_dense(const GridShape& g, const VectorClock& v);

  const std::vector<BlockVC>& blocks() const { return blocks_; }
  CompressionCounts counts() const;
  std::size_t materialized() const { return counts().entries; }

  // Representation equality, not just denotation.
  bool operator==(const CompressedPTVC&) const = default;

 private:
  void check(std::uint32_t flat) const;
  void recompress_block(BlockVC& b) const;

  GridShape shape_{};
  std::vector<BlockVC> blocks_;
};

CompressedPTVC ptvc_join(const CompressedPTVC& p, const CompressedPTVC& q);

// Barrier join with forced compression: every participant ends up with the
// plain join of all participant clocks, except that the columns of the
// participants themselves are raised to the largest value found in those
// columns. Whole blocks (and whole warps) of participants are stored
// compressed. Returns that largest value.
Time forced_barrier_join(std::span<CompressedPTVC* const> clocks,
                         std::span<const std::uint32_t> participants);

}  // namespace gpurace

#endif  // GPURACE_PTVC_HPP
