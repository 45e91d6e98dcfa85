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

#include <algorithm>

#include "gpurace/sync.hpp"
#include "gpurace/trace.hpp"

namespace gpurace {

namespace {

struct Held {
  LockId lock;
  Scope scope;
};

}  // namespace

std::vector<Diagnostic> validate_trace(const Trace& t) {
  const GridShape& g = t.config;
  std::vector<Diagnostic> out;
  auto diag = [&](std::size_t i, std::string msg) { out.push_back({i, std::move(msg)}); };

  std::vector<bool> ended(g.thread_count(), false);
  std::vector<std::vector<Held>> held(g.thread_count());

  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const Event& e = t.events[i];

    if (e.kind == EventKind::Barrier) {
      if (e.barBlock >= g.blocks || (e.barrier == BarrierKind::Warp && e.barWarp >= g.warpsPerBlock)) {
        diag(i, "barrier outside the grid");
        continue;
      }
      if (e.barrier == BarrierKind::Warp) {
        if (e.mask == 0) diag(i, "empty barrier");
        if (e.mask & ~g.full_mask()) diag(i, "lane >= warp size in barrier mask");
        for (std::uint32_t lane = 0; lane < g.warpSize; ++lane)
          if ((e.mask >> lane & 1) && ended[g.flat(ThreadId{e.barBlock, e.barWarp, lane})]) {
            diag(i, "barrier divergence: lane " + std::to_string(lane) + " has ended");
            break;
          }
      } else {
        bool any = false;
        bool divergent = false;
        for (std::uint32_t w = 0; w < g.warpsPerBlock; ++w) {
          for (std::uint32_t lane = 0; lane < g.warpSize; ++lane) {
            bool live = !ended[g.flat(ThreadId{e.barBlock, w, lane})];
            any = any || live;
            if (e.warpMasks.empty()) continue;
            bool in = w < e.warpMasks.size() && (e.warpMasks[w] >> lane & 1);
            if (in != live) divergent = true;
          }
        }
        if (!any) diag(i, "empty barrier");
        if (divergent) diag(i, "barrier divergence");
      }
      continue;
    }

    if (!g.contains(e.tid)) {
      diag(i, "thread outside the grid");
      continue;
    }
    const std::uint32_t f = g.flat(e.tid);
    if (ended[f]) {
      diag(i, "event after end");
      continue;
    }
    auto& hs = held[f];

    switch (e.kind) {
      case EventKind::Read:
      case EventKind::Write:
        if (e.loc.space == Space::Shared && e.loc.block != e.tid.block)
          diag(i, "shared location of another block");
        if (e.atomic && !e.scope.is_device() && e.scope.block != e.tid.block)
          diag(i, "atomic scope names another block");
        if (e.record != kNoRecord && i > 0) {
          const Event& p = t.events[i - 1];
          if (p.record == e.record &&
              (!p.is_access() || !p.tid.same_warp(e.tid) || p.tid.lane >= e.tid.lane ||
               p.kind != e.kind || p.instr != e.instr || p.atomic != e.atomic))
            diag(i, "malformed warp record");
        }
        break;
      case EventKind::Acquire: {
        if (!e.scope.is_device() && e.scope.block != e.tid.block) {
          diag(i, "lock scope names another block");
          break;
        }
        if (std::any_of(hs.begin(), hs.end(), [&](const Held& h) { return h.lock == e.lock; })) {
          diag(i, "reentrant acquire");
          break;
        }
        ScopedLockInstance mine{e.lock, e.scope};
        for (std::uint32_t u = 0; u < held.size(); ++u) {
          if (u == f) continue;
          for (const Held& h : held[u])
            if (h.lock == e.lock && scopes_overlap(mine, ScopedLockInstance{h.lock, h.scope}))
              diag(i, "lock held in an overlapping scope by " + to_string(g.tid(u)));
        }
        hs.push_back({e.lock, e.scope});
        break;
      }
      case EventKind::Release: {
        auto it = std::find_if(hs.begin(), hs.end(), [&](const Held& h) { return h.lock == e.lock; });
        if (it == hs.end()) {
          diag(i, "release of unheld lock");
          break;
        }
        if (std::next(it) != hs.end()) diag(i, "improperly nested release");
        if (!(it->scope == e.scope)) diag(i, "release scope differs from acquire");
        hs.erase(it);
        break;
      }
      case EventKind::Fence:
        break;
      case EventKind::End:
        if (!hs.empty()) diag(i, "exit while holding a lock");
        ended[f] = true;
        break;
      case EventKind::Barrier:
        break;
    }
  }
  return out;
}

}  // namespace gpurace
