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

// Scoped happens-before detector.

#include <algorithm>
#include <map>
#include <unordered_map>

#include "detector_common.hpp"

namespace gpurace {

namespace {

using detail::OwnedClock;

template <class Clock>
class HbEngine {
 public:
  HbEngine(const Trace& t, const DetectorOptions& opt)
      : trace_(t), opt_(opt), g_(t.config), log_("hb"), parts_(barrier_participants(t)) {
    threads_.resize(g_.thread_count());
    for (std::uint32_t u = 0; u < g_.thread_count(); ++u) threads_[u].h = OwnedClock<Clock>{Clock::zero(g_), u, 1};
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
  struct Thread {
    OwnedClock<Clock> h;  // h.own is the local time
    std::vector<ScopedLockInstance> held;
    bool ended = false;
  };

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
    const Time stamp = th.h.own;
    switch (e.kind) {
      case EventKind::Read:
      case EventKind::Write: {
        detail::check_same_instruction(trace_, i, log_);
        auto& hist = history_[e.loc];
        detail::check_access(hist, e, i, t, [&](std::uint32_t u) { return th.h.get(u); }, log_);
        detail::update_access(hist, e, i, t, th.h.own);
        break;
      }
      case EventKind::Acquire: {
        auto& inst = locks_[e.lock];
        for (const auto& [key, c] : inst)
          if (hb_release_acquire_applies(detail::instance_scope(key), e.scope, detail::instance_holder(key), e.tid))
            th.h.join(c);
        th.held.push_back({e.lock, e.scope});
        break;
      }
      case EventKind::Release: {
        if (th.held.empty() || th.held.back().lock != e.lock) {
          diags_.push_back({i, "release of a lock that is not the innermost held lock"});
          return;
        }
        const std::uint64_t key = detail::instance_key(th.held.back().scope);
        th.held.pop_back();
        locks_[e.lock].try_emplace(key, Clock::zero(g_)).first->second.join(th.h.materialize());
        if (order_) order_->record(i, t, stamp, th.h.materialize());
        th.h.own += 1;
        return;
      }
      case EventKind::End:
        if (!th.held.empty()) diags_.push_back({i, "exit while holding a lock"});
        th.ended = true;
        break;
      default:
        break;
    }
    if (order_) order_->record(i, t, stamp, th.h.materialize());
  }

  void barrier(const std::vector<std::uint32_t>& parts) {
    std::vector<std::uint32_t> live;
    for (std::uint32_t u : parts)
      if (!threads_[u].ended) live.push_back(u);
    if (live.empty()) return;
    if constexpr (std::is_same_v<Clock, CompressedPTVC>) {
      if (opt_.compress) {
        std::vector<Clock> hs;
        for (std::uint32_t u : live) hs.push_back(threads_[u].h.materialize());
        std::vector<Clock*> hp;
        for (auto& c : hs) hp.push_back(&c);
        const Time top = forced_barrier_join(hp, live);
        for (std::uint32_t u : live) {
          threads_[u].h.stored = hs[0];
          threads_[u].h.own = top + 1;
        }
        return;
      }
    }
    Clock hj = Clock::zero(g_);
    for (std::uint32_t u : live) hj.join(threads_[u].h.materialize());
    for (std::uint32_t u : live) {
      threads_[u].h.stored = hj;
      threads_[u].h.own += 1;
    }
  }

  void sample(ClockStats& s) const {
    CompressionCounts c;
    for (const Thread& th : threads_) c += detail::clock_counts(th.h.stored);
    std::size_t total = c.entries;
    for (const auto& [lock, inst] : locks_)
      for (const auto& [key, k] : inst) total += detail::clock_counts(k).entries;
    s.perEvent.push_back(c);
    s.peakEntries = std::max(s.peakEntries, total);
  }

  const Trace& trace_;
  DetectorOptions opt_;
  GridShape g_;
  RaceLog log_;
  std::vector<std::vector<std::uint32_t>> parts_;
  std::vector<Thread> threads_;
  std::map<LockId, std::map<std::uint64_t, Clock>> locks_;
  std::unordered_map<Location, detail::LocationHistory, LocationHash> history_;
  std::vector<Diagnostic> diags_;
  std::optional<detail::OrderRecorder> order_;
};

}  // namespace

DetectionResult run_hb(const Trace& t, const DetectorOptions& opt) {
  if (opt.compress) return HbEngine<CompressedPTVC>(t, opt).run();
  return HbEngine<VectorClock>(t, opt).run();
}

std::string_view to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::Gwcp:
      return "gwcp";
    case DetectorKind::Hb:
      return "hb";
    case DetectorKind::Lockset:
      return "lockset";
  }
  return "?";
}

std::optional<DetectorKind> detector_from_string(std::string_view s) {
  if (s == "gwcp") return DetectorKind::Gwcp;
  if (s == "hb") return DetectorKind::Hb;
  if (s == "lockset") return DetectorKind::Lockset;
  return std::nullopt;
}

DetectionResult run_detector(DetectorKind k, const Trace& t, const DetectorOptions& opt) {
  switch (k) {
    case DetectorKind::Gwcp:
      return run_gwcp(t, opt);
    case DetectorKind::Hb:
      return run_hb(t, opt);
    case DetectorKind::Lockset:
      return run_lockset(t, opt);
  }
  return {};
}

}  // namespace gpurace
