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

// Weak-causal-precedence detector with scoped locks, atomics and barriers.
//
// Each thread t keeps a local time N_t and two clocks: H_t (scoped
// happens-before) and P_t (the predictive order, strictly weaker than H_t).
// Race checks compare against C_t = P_t[t := N_t]. The own column of both
// stored clocks is kept out of band so that barrier-synchronized blocks stay
// compressed while their threads advance independently.
//
// Release -> acquire ordering that only holds because of conflicting critical
// sections is discovered in two ways: directly, when an access inside a
// critical section conflicts with a location touched in an earlier critical
// section of the same lock, and indirectly, through per-thread queues that
// remember when each acquire happened and deliver the matching release once
// the acquire is known to precede the current thread.

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "detector_common.hpp"

namespace gpurace {

namespace {

using detail::instance_key;
using detail::instance_scope;
using detail::kDeviceKey;
using detail::OwnedClock;

template <class Clock>
class GwcpEngine {
 public:
  GwcpEngine(const Trace& t, const DetectorOptions& opt)
      : trace_(t), opt_(opt), g_(t.config), log_("gwcp"), parts_(barrier_participants(t)) {
    const Clock zero = Clock::zero(g_);
    threads_.resize(g_.thread_count());
    for (std::uint32_t u = 0; u < g_.thread_count(); ++u) {
      Thread& th = threads_[u];
      th.h = OwnedClock<Clock>{zero, u, 1};
      th.p = OwnedClock<Clock>{zero, u, 0};
    }
    if (opt.orderMatrix) order_.emplace(t.events.size());
  }

  DetectionResult run() {
    DetectionResult out;
    if (opt_.collectStats) out.stats.emplace();
    for (std::size_t i = 0; i < trace_.events.size(); ++i) {
      step(i);
      if (out.stats) sample(*out.stats);
    }
    out.reports = log_.take();
    out.diagnostics = std::move(diags_);
    if (order_) out.order = order_->finish();
    return out;
  }

 private:
  struct Frame {
    ScopedLockInstance inst;
    std::set<Location> reads, writes;
  };
  struct Thread {
    Time n = 1;
    OwnedClock<Clock> h, p;  // h.own is always n
    std::vector<Frame> held;
    bool ended = false;
  };
  struct Entry {
    std::shared_ptr<const Clock> acq;
    ScopedLockInstance inst;
    std::shared_ptr<const Clock> rel;  // set by the matching release
  };
  using EntryPtr = std::shared_ptr<Entry>;
  struct InstanceClocks {
    Clock h, p;
  };
  struct LockState {
    std::map<std::uint64_t, InstanceClocks> instances;
    std::unordered_map<std::uint32_t, std::deque<EntryPtr>> queues;
    std::deque<EntryPtr> shared;  // entries for threads that never acquired the lock
    std::unordered_set<std::uint32_t> active;
    std::unordered_map<std::uint32_t, EntryPtr> open;
    std::map<std::pair<std::uint64_t, Location>, Clock> lr, lw;
  };

  Clock current(const Thread& th) const { return th.p.materialize(th.n); }

  void step(std::size_t i) {
    const Event& e = trace_.events[i];
    if (e.kind == EventKind::Barrier) {
      barrier(parts_[i]);
      return;
    }
    if (!g_.contains(e.tid)) return;
    const std::uint32_t t = g_.flat(e.tid);
    Thread& th = threads_[t];
    if (th.ended) {
      diags_.push_back({i, "event after end"});
      return;
    }
    Time stamp = th.n;
    switch (e.kind) {
      case EventKind::Read:
      case EventKind::Write:
        access(i, t, e);
        break;
      case EventKind::Acquire:
        acquire(i, t, e);
        break;
      case EventKind::Release:
        release(i, t, e);
        break;
      case EventKind::End:
        finish(i, t);
        break;
      default:
        break;
    }
    if (order_) order_->record(i, t, stamp, current(th));
  }

  void drain(std::uint32_t t, LockState& ls, const ScopedLockInstance& inst) {
    auto it = ls.queues.find(t);
    if (it == ls.queues.end()) return;
    Thread& th = threads_[t];
    auto& q = it->second;
    // Entries are self-contained (acquire, release) pairs, so any covered
    // entry can go; an entry of a non-overlapping instance must not block
    // the ones behind it.
    for (bool progress = true; progress;) {
      progress = false;
      for (auto e = q.begin(); e != q.end();) {
        const Entry& en = **e;
        if (!en.rel || !th.p.covers(*en.acq, th.n)) {
          ++e;
          continue;
        }
        if (scopes_overlap(en.inst, inst)) {
          th.p.join(*en.rel);
          progress = true;
        }
        e = q.erase(e);
      }
    }
  }

  void acquire(std::size_t i, std::uint32_t t, const Event& e) {
    Thread& th = threads_[t];
    const ScopedLockInstance inst{e.lock, e.scope};
    for (const Frame& f : th.held)
      if (f.inst.lock == e.lock) {
        diags_.push_back({i, "reentrant acquire"});
        return;
      }
    LockState& ls = locks_[e.lock];
    if (opt_.inactiveOpt && ls.active.insert(t).second) ls.queues[t] = ls.shared;
    drain(t, ls, inst);
    for (const auto& [key, ic] : ls.instances) {
      if (!hb_release_acquire_applies(instance_scope(key), e.scope, detail::instance_holder(key), e.tid))
        continue;
      th.h.join(ic.h);
      th.p.join(ic.p);
    }
    th.held.push_back(Frame{inst, {}, {}});

    auto entry = std::make_shared<Entry>(Entry{std::make_shared<const Clock>(current(th)), inst, nullptr});
    ls.open[t] = entry;
    if (opt_.inactiveOpt) {
      for (std::uint32_t u : ls.active)
        if (u != t && !threads_[u].ended) ls.queues[u].push_back(entry);
      ls.shared.push_back(entry);
    } else {
      for (std::uint32_t u = 0; u < threads_.size(); ++u)
        if (u != t && !threads_[u].ended) ls.queues[u].push_back(entry);
    }
  }

  void release(std::size_t i, std::uint32_t t, const Event& e) {
    Thread& th = threads_[t];
    if (th.held.empty() || th.held.back().inst.lock != e.lock) {
      diags_.push_back({i, "release of a lock that is not the innermost held lock"});
      return;
    }
    Frame frame = std::move(th.held.back());
    th.held.pop_back();
    LockState& ls = locks_[e.lock];
    drain(t, ls, frame.inst);

    const std::uint64_t key = instance_key(frame.inst.scope);
    const Clock h = th.h.materialize();
    const Clock zero = Clock::zero(g_);
    for (const Location& x : frame.reads) ls.lr.try_emplace({key, x}, zero).first->second.join(h);
    for (const Location& x : frame.writes) ls.lw.try_emplace({key, x}, zero).first->second.join(h);
    auto& ic = ls.instances.try_emplace(key, InstanceClocks{zero, zero}).first->second;
    ic.h.join(h);
    ic.p.join(th.p.materialize());

    if (auto it = ls.open.find(t); it != ls.open.end()) {
      it->second->rel = std::make_shared<const Clock>(h);
      ls.open.erase(it);
    }
    th.n += 1;
    th.h.own = th.n;
  }

  void access(std::size_t i, std::uint32_t t, const Event& e) {
    Thread& th = threads_[t];
    detail::check_same_instruction(trace_, i, log_);

    for (const Frame& f : th.held) {
      LockState& ls = locks_[f.inst.lock];
      for (const auto& kv : ls.instances) {
        const std::uint64_t key = kv.first;
        if (!scopes_overlap(ScopedLockInstance{f.inst.lock, instance_scope(key)}, f.inst)) continue;
        if (auto w = ls.lw.find({key, e.loc}); w != ls.lw.end()) th.p.join(w->second);
        if (e.is_write())
          if (auto r = ls.lr.find({key, e.loc}); r != ls.lr.end()) th.p.join(r->second);
      }
    }

    auto& hist = history_[e.loc];
    detail::check_access(
        hist, e, i, t, [&](std::uint32_t u) { return u == t ? th.n : th.p.get(u); }, log_);
    detail::update_access(hist, e, i, t, th.n);

    for (Frame& f : th.held) (e.is_write() ? f.writes : f.reads).insert(e.loc);
  }

  void finish(std::size_t i, std::uint32_t t) {
    Thread& th = threads_[t];
    if (!th.held.empty()) diags_.push_back({i, "exit while holding a lock"});
    th.ended = true;
    for (auto& [lock, ls] : locks_) ls.queues.erase(t);
  }

  // P_u[u] after a barrier: the largest value any participant knows for u.
  std::vector<Time> barrier_own_p(const std::vector<std::uint32_t>& parts) const {
    std::vector<Time> own(parts.size(), 0);
    for (std::size_t a = 0; a < parts.size(); ++a)
      for (std::uint32_t v : parts) own[a] = std::max(own[a], threads_[v].p.get(parts[a]));
    return own;
  }

  void barrier(const std::vector<std::uint32_t>& parts) {
    std::vector<std::uint32_t> live;
    for (std::uint32_t u : parts)
      if (!threads_[u].ended) live.push_back(u);
    if (live.empty()) return;
    const std::vector<Time> ownP = barrier_own_p(live);

    if constexpr (std::is_same_v<Clock, CompressedPTVC>) {
      if (opt_.compress) {
        std::vector<Clock> hs, cs;
        for (std::uint32_t u : live) {
          hs.push_back(threads_[u].h.materialize());
          cs.push_back(current(threads_[u]));
        }
        std::vector<Clock*> hp, cp;
        for (std::size_t a = 0; a < live.size(); ++a) {
          hp.push_back(&hs[a]);
          cp.push_back(&cs[a]);
        }
        const Time top = forced_barrier_join(hp, live);
        forced_barrier_join(cp, live);
        for (std::size_t a = 0; a < live.size(); ++a) {
          Thread& th = threads_[live[a]];
          th.h.stored = hs[0];
          th.p.stored = cs[0];
          th.p.own = ownP[a];
          th.n = top + 1;
          th.h.own = th.n;
        }
        return;
      }
    }

    Clock hj = Clock::zero(g_), cj = Clock::zero(g_);
    for (std::uint32_t u : live) {
      hj.join(threads_[u].h.materialize());
      cj.join(current(threads_[u]));
    }
    for (std::size_t a = 0; a < live.size(); ++a) {
      Thread& th = threads_[live[a]];
      th.h.stored = hj;
      th.p.stored = cj;
      th.p.own = ownP[a];
      th.n += 1;
      th.h.own = th.n;
    }
  }

  void sample(ClockStats& s) const {
    CompressionCounts c;
    std::size_t total = 0;
    for (const Thread& th : threads_) {
      c += detail::clock_counts(th.h.stored);
      c += detail::clock_counts(th.p.stored);
    }
    total = c.entries;
    std::unordered_set<const Clock*> seen;
    auto add = [&](const Clock* k) {
      if (k && seen.insert(k).second) total += detail::clock_counts(*k).entries;
    };
    for (const auto& [lock, ls] : locks_) {
      for (const auto& [key, ic] : ls.instances) total += detail::clock_counts(ic.h).entries + detail::clock_counts(ic.p).entries;
      for (const auto& [k, v] : ls.lr) total += detail::clock_counts(v).entries;
      for (const auto& [k, v] : ls.lw) total += detail::clock_counts(v).entries;
      auto addq = [&](const std::deque<EntryPtr>& q) {
        for (const auto& en : q) {
          add(en->acq.get());
          add(en->rel.get());
        }
      };
      for (const auto& [u, q] : ls.queues) addq(q);
      addq(ls.shared);
    }
    s.perEvent.push_back(c);
    s.peakEntries = std::max(s.peakEntries, total);
  }

  const Trace& trace_;
  DetectorOptions opt_;
  GridShape g_;
  RaceLog log_;
  std::vector<std::vector<std::uint32_t>> parts_;
  std::vector<Thread> threads_;
  std::map<LockId, LockState> locks_;
  std::unordered_map<Location, detail::LocationHistory, LocationHash> history_;
  std::vector<Diagnostic> diags_;
  std::optional<detail::OrderRecorder> order_;
};

}  // namespace

DetectionResult run_gwcp(const Trace& t, const DetectorOptions& opt) {
  if (opt.compress) return GwcpEngine<CompressedPTVC>(t, opt).run();
  return GwcpEngine<VectorClock>(t, opt).run();
}

}  // namespace gpurace
