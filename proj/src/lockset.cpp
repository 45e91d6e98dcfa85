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

// Scoped lockset detector with a fence fallback for lock-free accesses.
//
// Two conflicting accesses from different threads are a race unless a barrier
// both threads joined separates them, both are covering atomics, they hold a
// common lock in overlapping scopes, or (when neither holds a lock) the
// earlier thread issued a fence after its access whose scope reaches the
// later thread.

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "detector_common.hpp"

namespace gpurace {

namespace {

struct Access {
  std::size_t event = 0;
  ThreadId tid{};
  std::uint64_t instr = 0;
  AccessAttr attr{};
  std::vector<ScopedLockInstance> held;
};

struct History {
  std::optional<Access> write;
  std::map<std::uint32_t, Access> readers;
};

struct FenceMark {
  std::size_t event;
  Scope scope;
};

class LocksetEngine {
 public:
  LocksetEngine(const Trace& t, const DetectorOptions& opt)
      : trace_(t), opt_(opt), g_(t.config), log_("lockset", true), held_(g_.thread_count()),
        barriers_(g_.thread_count()), fences_(g_.thread_count()) {
    const auto parts = barrier_participants(t);
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::uint32_t u : parts[i]) barriers_[u].push_back(i);
  }

  DetectionResult run() {
    for (std::size_t i = 0; i < trace_.events.size(); ++i) step(i);
    DetectionResult out;
    out.reports = log_.take();
    out.diagnostics = std::move(diags_);
    return out;
  }

 private:
  bool same_thread(const ThreadId& a, const ThreadId& b) const {
    return opt_.warpGranularity ? a.same_warp(b) : a == b;
  }

  bool barrier_between(const ThreadId& a, const ThreadId& b, std::size_t from, std::size_t to) const {
    const auto& ba = barriers_[g_.flat(a)];
    const auto& bb = barriers_[g_.flat(b)];
    auto it = std::upper_bound(ba.begin(), ba.end(), from);
    for (; it != ba.end() && *it < to; ++it)
      if (std::binary_search(bb.begin(), bb.end(), *it)) return true;
    return false;
  }

  bool fenced(const Access& prior, const ThreadId& cur, std::size_t now) const {
    for (const FenceMark& f : fences_[g_.flat(prior.tid)])
      if (f.event > prior.event && f.event < now && fence_covers(f.scope, prior.tid, cur)) return true;
    return false;
  }

  static bool common_lock(const Access& a, const Access& b) {
    for (const auto& x : a.held)
      for (const auto& y : b.held)
        if (x.lock == y.lock && scopes_overlap(x, y)) return true;
    return false;
  }

  bool races(const Access& prior, const Access& cur) const {
    if (same_thread(prior.tid, cur.tid)) return false;
    if (barrier_between(prior.tid, cur.tid, prior.event, cur.event)) return false;
    if (atomics_cover(prior.attr, cur.attr, prior.tid, cur.tid)) return false;
    if (!prior.held.empty() || !cur.held.empty()) return !common_lock(prior, cur);
    return !fenced(prior, cur.tid, cur.event);
  }

  void report(RaceKind k, const Location& loc, const Access& prior, const Access& cur) {
    log_.report(k, loc, AccessRef{prior.event, prior.tid, prior.instr}, AccessRef{cur.event, cur.tid, cur.instr});
  }

  void step(std::size_t i) {
    const Event& e = trace_.events[i];
    if (!e.has_thread() || !g_.contains(e.tid)) return;
    const std::uint32_t t = g_.flat(e.tid);
    auto& held = held_[t];
    switch (e.kind) {
      case EventKind::Acquire:
        held.push_back({e.lock, e.scope});
        fences_[t].push_back({i, e.scope});
        break;
      case EventKind::Release: {
        auto it = std::find_if(held.rbegin(), held.rend(), [&](const auto& h) { return h.lock == e.lock; });
        if (it == held.rend()) {
          diags_.push_back({i, "release of unheld lock"});
          break;
        }
        fences_[t].push_back({i, it->scope});
        held.erase(std::next(it).base());
        break;
      }
      case EventKind::Fence:
        fences_[t].push_back({i, e.scope});
        break;
      case EventKind::Read:
      case EventKind::Write:
        access(i, t, e);
        break;
      default:
        break;
    }
  }

  void access(std::size_t i, std::uint32_t t, const Event& e) {
    if (!opt_.warpGranularity) detail::check_same_instruction(trace_, i, log_);
    Access cur{i, e.tid, e.instr, AccessAttr::of(e), held_[t]};
    History& h = history_[e.loc];
    if (h.write && races(*h.write, cur)) report(e.is_write() ? RaceKind::WW : RaceKind::WR, e.loc, *h.write, cur);
    if (e.is_write()) {
      for (const auto& [u, r] : h.readers)
        if (races(r, cur)) report(RaceKind::RW, e.loc, r, cur);
      h.write = std::move(cur);
      h.readers.clear();
    } else {
      h.readers[t] = std::move(cur);
    }
  }

  const Trace& trace_;
  DetectorOptions opt_;
  GridShape g_;
  RaceLog log_;
  std::vector<std::vector<ScopedLockInstance>> held_;
  std::vector<std::vector<std::size_t>> barriers_;  // sorted event indices per thread
  std::vector<std::vector<FenceMark>> fences_;
  std::unordered_map<Location, History, LocationHash> history_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

DetectionResult run_lockset(const Trace& t, const DetectorOptions& opt) { return LocksetEngine(t, opt).run(); }

}  // namespace gpurace
