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

#include "gpurace/ptvc.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace gpurace {

CompressionCounts& CompressionCounts::operator+=(const CompressionCounts& o) {
  blockCompressed += o.blockCompressed;
  blockExpanded += o.blockExpanded;
  warpCompressed += o.warpCompressed;
  warpExpanded += o.warpExpanded;
  entries += o.entries;
  return *this;
}

namespace {

using WarpVC = CompressedPTVC::WarpVC;
using BlockVC = CompressedPTVC::BlockVC;

Time warp_get(const WarpVC& w, std::uint32_t lane) {
  if (!w.expanded) return w.time;
  auto it = std::lower_bound(w.lanes.begin(), w.lanes.end(), lane,
                             [](const auto& p, std::uint32_t l) { return p.first < l; });
  return it != w.lanes.end() && it->first == lane ? it->second : 0;
}

Time warp_max(const WarpVC& w) {
  if (!w.expanded) return w.time;
  Time m = 0;
  for (const auto& [lane, t] : w.lanes) m = std::max(m, t);
  return m;
}

Time warp_min(const WarpVC& w, std::uint32_t warpSize) {
  if (!w.expanded) return w.time;
  if (w.lanes.size() < warpSize) return 0;
  Time m = w.lanes.front().second;
  for (const auto& [lane, t] : w.lanes) m = std::min(m, t);
  return m;
}

void expand_warp(WarpVC& w, std::uint32_t warpSize) {
  if (w.expanded) return;
  w.expanded = true;
  w.lanes.clear();
  if (w.time != 0)
    for (std::uint32_t l = 0; l < warpSize; ++l) w.lanes.emplace_back(l, w.time);
  w.time = 0;
}

void expand_block(BlockVC& b, std::uint32_t warpsPerBlock) {
  if (b.expanded) return;
  b.expanded = true;
  b.warps.assign(warpsPerBlock, WarpVC{false, b.time, {}});
  b.time = 0;
}

void recompress_warp(WarpVC& w, std::uint32_t warpSize) {
  if (!w.expanded) return;
  if (w.lanes.empty()) {
    w = WarpVC{};
    return;
  }
  if (w.lanes.size() != warpSize) return;
  Time first = w.lanes.front().second;
  for (const auto& [lane, t] : w.lanes)
    if (t != first) return;
  w = WarpVC{false, first, {}};
}

void warp_join_uniform(WarpVC& w, Time x, std::uint32_t warpSize) {
  if (x == 0) return;
  if (!w.expanded) {
    w.time = std::max(w.time, x);
    return;
  }
  std::vector<std::pair<std::uint32_t, Time>> merged;
  merged.reserve(warpSize);
  for (std::uint32_t l = 0; l < warpSize; ++l) merged.emplace_back(l, std::max(x, warp_get(w, l)));
  w.lanes = std::move(merged);
}

void warp_join(WarpVC& w, const WarpVC& o, std::uint32_t warpSize) {
  if (!o.expanded) {
    warp_join_uniform(w, o.time, warpSize);
    return;
  }
  if (!w.expanded) {
    Time x = w.time;
    w = o;
    warp_join_uniform(w, x, warpSize);
    return;
  }
  std::vector<std::pair<std::uint32_t, Time>> merged;
  merged.reserve(std::max(w.lanes.size(), o.lanes.size()));
  auto a = w.lanes.begin();
  auto b = o.lanes.begin();
  while (a != w.lanes.end() || b != o.lanes.end()) {
    if (b == o.lanes.end() || (a != w.lanes.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == w.lanes.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      merged.emplace_back(a->first, std::max(a->second, b->second));
      ++a;
      ++b;
    }
  }
  w.lanes = std::move(merged);
}

bool warp_leq(const WarpVC& a, const WarpVC& b, std::uint32_t warpSize) {
  if (!a.expanded) return a.time == 0 || a.time <= warp_min(b, warpSize);
  if (!b.expanded) return warp_max(a) <= b.time;
  for (const auto& [lane, t] : a.lanes)
    if (t > warp_get(b, lane)) return false;
  return true;
}

}  // namespace

void CompressedPTVC::check(std::uint32_t flat) const {
  if (flat >= width()) throw std::out_of_range("thread id out of range for this clock");
}

Time CompressedPTVC::get(std::uint32_t flat) const {
  check(flat);
  return get(shape_.tid(flat));
}

Time CompressedPTVC::get(const ThreadId& t) const {
  if (!shape_.contains(t)) throw std::out_of_range("thread id out of range for this clock");
  const BlockVC& b = blocks_[t.block];
  if (!b.expanded) return b.time;
  return warp_get(b.warps[t.warp], t.lane);
}

void CompressedPTVC::set(std::uint32_t flat, Time v) {
  check(flat);
  ThreadId t = shape_.tid(flat);
  BlockVC& b = blocks_[t.block];
  if (!b.expanded) {
    if (b.time == v) return;
    expand_block(b, shape_.warpsPerBlock);
  }
  WarpVC& w = b.warps[t.warp];
  if (!w.expanded) {
    if (w.time == v) return;
    expand_warp(w, shape_.warpSize);
  }
  auto it = std::lower_bound(w.lanes.begin(), w.lanes.end(), t.lane,
                             [](const auto& p, std::uint32_t l) { return p.first < l; });
  bool present = it != w.lanes.end() && it->first == t.lane;
  if (v == 0) {
    if (present) w.lanes.erase(it);
  } else if (present) {
    it->second = v;
  } else {
    w.lanes.insert(it, {t.lane, v});
  }
}

void CompressedPTVC::set_block(std::uint32_t block, Time v) {
  if (block >= shape_.blocks) throw std::out_of_range("block out of range for this clock");
  blocks_[block] = BlockVC{false, v, {}};
}

void CompressedPTVC::set_warp(std::uint32_t block, std::uint32_t warp, Time v) {
  if (block >= shape_.blocks || warp >= shape_.warpsPerBlock)
    throw std::out_of_range("warp out of range for this clock");
  BlockVC& b = blocks_[block];
  if (!b.expanded) {
    if (b.time == v) return;
    expand_block(b, shape_.warpsPerBlock);
  }
  b.warps[warp] = WarpVC{false, v, {}};
}

void CompressedPTVC::recompress_block(BlockVC& b) const {
  if (!b.expanded) return;
  for (auto& w : b.warps) recompress_warp(w, shape_.warpSize);
  Time first = b.warps.front().time;
  for (const auto& w : b.warps)
    if (w.expanded || w.time != first) return;
  b = BlockVC{false, first, {}};
}

void CompressedPTVC::recompress() {
  for (auto& b : blocks_) recompress_block(b);
}

void CompressedPTVC::join(const CompressedPTVC& o) {
  if (!(o.shape_ == shape_)) throw WidthMismatch();
  for (std::uint32_t i = 0; i < blocks_.size(); ++i) {
    BlockVC& a = blocks_[i];
    const BlockVC& b = o.blocks_[i];
    if (!a.expanded && !b.expanded) {
      a.time = std::max(a.time, b.time);
      continue;
    }
    if (!b.expanded) {
      if (b.time == 0) continue;
      for (auto& w : a.warps) warp_join_uniform(w, b.time, shape_.warpSize);
    } else if (!a.expanded) {
      Time x = a.time;
      a = b;
      if (x != 0)
        for (auto& w : a.warps) warp_join_uniform(w, x, shape_.warpSize);
    } else {
      for (std::uint32_t w = 0; w < a.warps.size(); ++w) warp_join(a.warps[w], b.warps[w], shape_.warpSize);
    }
    recompress_block(a);
  }
}

bool CompressedPTVC::leq(const CompressedPTVC& o) const {
  if (!(o.shape_ == shape_)) throw WidthMismatch();
  for (std::uint32_t i = 0; i < blocks_.size(); ++i) {
    const BlockVC& a = blocks_[i];
    const BlockVC& b = o.blocks_[i];
    if (!a.expanded && !b.expanded) {
      if (a.time > b.time) return false;
      continue;
    }
    for (std::uint32_t w = 0; w < shape_.warpsPerBlock; ++w) {
      WarpVC wa = a.expanded ? a.warps[w] : WarpVC{false, a.time, {}};
      WarpVC wb = b.expanded ? b.warps[w] : WarpVC{false, b.time, {}};
      if (!warp_leq(wa, wb, shape_.warpSize)) return false;
    }
  }
  return true;
}

VectorClock CompressedPTVC::dense() const {
  VectorClock v(width());
  for (std::uint32_t f = 0; f < width(); ++f) v.set(f, get(f));
  return v;
}

CompressedPTVC CompressedPTVC::from_dense(const GridShape& g, const VectorClock& v) {
  CompressedPTVC p(g);
  for (std::uint32_t f = 0; f < g.thread_count(); ++f) p.set(f, v.get(f));
  p.recompress();
  return p;
}

CompressionCounts CompressedPTVC::counts() const {
  CompressionCounts c;
  for (const auto& b : blocks_) {
    if (!b.expanded) {
      ++c.blockCompressed;
      ++c.entries;
      continue;
    }
    ++c.blockExpanded;
    for (const auto& w : b.warps) {
      if (w.expanded) {
        ++c.warpExpanded;
        c.entries += w.lanes.size();
      } else {
        ++c.warpCompressed;
        ++c.entries;
      }
    }
  }
  return c;
}

CompressedPTVC ptvc_join(const CompressedPTVC& p, const CompressedPTVC& q) {
  CompressedPTVC r = p;
  r.join(q);
  return r;
}

Time forced_barrier_join(std::span<CompressedPTVC* const> clocks,
                         std::span<const std::uint32_t> participants) {
  if (participants.empty()) throw std::invalid_argument("forced_barrier_join: no participants");
  if (clocks.empty()) throw std::invalid_argument("forced_barrier_join: no clocks");
  const GridShape g = clocks.front()->shape();

  CompressedPTVC joined = *clocks.front();
  for (std::size_t i = 1; i < clocks.size(); ++i) joined.join(*clocks[i]);

  Time top = 0;
  for (std::uint32_t u : participants) top = std::max(top, joined.get(u));

  // Group participants by block and warp so whole groups are written as one
  // compressed value instead of lane by lane.
  std::map<std::uint32_t, std::map<std::uint32_t, std::vector<std::uint32_t>>> groups;
  for (std::uint32_t u : participants) {
    if (u >= g.thread_count()) throw std::out_of_range("participant out of range");
    ThreadId t = g.tid(u);
    groups[t.block][t.warp].push_back(u);
  }
  for (auto& [block, warps] : groups) {
    bool wholeBlock = warps.size() == g.warpsPerBlock;
    for (auto& [warp, lanes] : warps) {
      std::sort(lanes.begin(), lanes.end());
      lanes.erase(std::unique(lanes.begin(), lanes.end()), lanes.end());
      wholeBlock = wholeBlock && lanes.size() == g.warpSize;
    }
    if (wholeBlock) {
      joined.set_block(block, top);
      continue;
    }
    for (auto& [warp, lanes] : warps) {
      if (lanes.size() == g.warpSize)
        joined.set_warp(block, warp, top);
      else
        for (std::uint32_t u : lanes) joined.set(u, top);
    }
  }
  joined.recompress();
  for (CompressedPTVC* c : clocks) *c = joined;
  return top;
}

}  // namespace gpurace
