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

// Pieces shared by the vector-clock detectors. Internal header.

#ifndef GPURACE_DETECTOR_COMMON_HPP
#define GPURACE_DETECTOR_COMMON_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "gpurace/detect.hpp"
#include "gpurace/ptvc.hpp"
#include "gpurace/report.hpp"
#include "gpurace/sync.hpp"
#include "gpurace/trace.hpp"
#include "gpurace/vclock.hpp"

namespace gpurace::detail {

inline VectorClock to_dense(const VectorClock& c) { return c; }
inline VectorClock to_dense(const CompressedPTVC& c) { return c.dense(); }

inline CompressionCounts clock_counts(const VectorClock& c) {
  CompressionCounts k;
  k.entries = c.width();
  return k;
}
inline CompressionCounts clock_counts(const CompressedPTVC& c) { return c.counts(); }

// a ⊑ b[idx := v]
template <class Clock>
bool leq_with_entry(const Clock& a, const Clock& b, std::uint32_t idx, Time v) {
  if (a.get(idx) > v) return false;
  if (b.get(idx) >= a.get(idx)) return a.leq(b);
  Clock c = b;
  c.set(idx, v);
  return a.leq(c);
}

// A per-thread clock whose own column lives beside the stored clock. The
// stored own entry is ignored, which lets a block that has gone through a
// barrier stay compressed while each thread keeps advancing its local time.
template <class Clock>
struct OwnedClock {
  Clock stored;
  std::uint32_t self = 0;
  Time own = 0;

  Time get(std::uint32_t i) const { return i == self ? own : stored.get(i); }
  void join(const Clock& x) {
    stored.join(x);
    own = std::max(own, x.get(self));
  }
  Clock materialize() const {
    Clock r = stored;
    r.set(self, own);
    return r;
  }
  // Same clock with the own column replaced by `ownTime`.
  Clock materialize(Time ownTime) const {
    Clock r = stored;
    r.set(self, ownTime);
    return r;
  }
  bool covers(const Clock& a) const { return leq_with_entry(a, stored, self, own); }
  bool covers(const Clock& a, Time ownTime) const { return leq_with_entry(a, stored, self, ownTime); }
};

struct PriorAccess {
  Time time = 0;
  std::uint32_t tid = 0;
  AccessAttr attr{};
  AccessRef ref{};
};

struct LocationHistory {
  std::optional<PriorAccess> write;
  std::map<std::uint32_t, PriorAccess> readers;
};

inline AccessRef access_ref(const Event& e, std::size_t index) {
  return AccessRef{index, e.tid, e.instr};
}

// Race checks of one access against the location's last write and readers.
// `known(u)` is the current thread's knowledge of thread u's local time.
template <class Known>
void check_access(const LocationHistory& h, const Event& e, std::size_t index, std::uint32_t t,
                  Known&& known, RaceLog& log) {
  const AccessAttr attr = AccessAttr::of(e);
  const AccessRef cur = access_ref(e, index);
  if (h.write && h.write->tid != t && h.write->time > known(h.write->tid) &&
      !atomics_cover(h.write->attr, attr, h.write->ref.tid, e.tid))
    log.report(e.is_write() ? RaceKind::WW : RaceKind::WR, e.loc, h.write->ref, cur);
  if (!e.is_write()) return;
  for (const auto& [u, r] : h.readers)
    if (u != t && r.time > known(u) && !atomics_cover(r.attr, attr, r.ref.tid, e.tid))
      log.report(RaceKind::RW, e.loc, r.ref, cur);
}

inline void update_access(LocationHistory& h, const Event& e, std::size_t index, std::uint32_t t,
                          Time now) {
  PriorAccess a{now, t, AccessAttr::of(e), access_ref(e, index)};
  if (e.is_write()) {
    h.write = a;
    h.readers.clear();
  } else {
    h.readers[t] = a;
  }
}

// Lanes of one coalesced warp access writing the same location race with
// each other regardless of any clock.
inline void check_same_instruction(const Trace& t, std::size_t i, RaceLog& log) {
  const auto& ev = t.events;
  if (ev[i].record == kNoRecord || (i > 0 && ev[i - 1].record == ev[i].record)) return;
  std::size_t end = i;
  while (end < ev.size() && ev[end].record == ev[i].record) ++end;
  for (std::size_t a = i; a < end; ++a) {
    if (!ev[a].is_write()) continue;
    for (std::size_t b = a + 1; b < end; ++b) {
      if (!ev[b].is_write() || !(ev[a].loc == ev[b].loc)) continue;
      if (atomics_cover(AccessAttr::of(ev[a]), AccessAttr::of(ev[b]), ev[a].tid, ev[b].tid)) continue;
      log.report(RaceKind::WW, ev[a].loc, access_ref(ev[a], a), access_ref(ev[b], b));
    }
  }
}

// Lock instance keys: a block index, or kDeviceKey.
constexpr std::uint64_t kDeviceKey = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t instance_key(const Scope& s) { return s.is_device() ? kDeviceKey : s.block; }
inline Scope instance_scope(std::uint64_t key) {
  return key == kDeviceKey ? Scope::device() : Scope::of_block(static_cast<std::uint32_t>(key));
}
inline ThreadId instance_holder(std::uint64_t key) {
  return ThreadId{key == kDeviceKey ? 0u : static_cast<std::uint32_t>(key), 0, 0};
}

// Records (thread, local time, view clock) per event and turns them into the
// pairwise order relation at the end.
class OrderRecorder {
 public:
  explicit OrderRecorder(std::size_t n) : rows_(n) {}

  template <class Clock>
  void record(std::size_t i, std::uint32_t tid, Time stamp, const Clock& view) {
    rows_[i] = Row{tid, stamp, to_dense(view)};
  }

  OrderMatrix finish() const {
    OrderMatrix m(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!rows_[i]) continue;
      for (std::size_t j = i + 1; j < rows_.size(); ++j) {
        if (!rows_[j]) continue;
        bool ordered = rows_[i]->tid == rows_[j]->tid || rows_[i]->stamp <= rows_[j]->view.get(rows_[i]->tid);
        m.set(i, j, ordered ? OrderMatrix::Ordered : OrderMatrix::Unordered);
      }
    }
    return m;
  }

 private:
  struct Row {
    std::uint32_t tid;
    Time stamp;
    VectorClock view;
  };
  std::vector<std::optional<Row>> rows_;
};

}  // namespace gpurace::detail

#endif  // GPURACE_DETECTOR_COMMON_HPP
