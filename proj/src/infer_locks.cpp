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

#include <map>

#include "gpurace/trace.hpp"

namespace gpurace {

namespace {

// Lock scope is device only when both the atomic and the fence are.
Scope lock_scope(const Event& atomic, const Event& fence) {
  if (atomic.scope.is_device() && fence.scope.is_device()) return Scope::device();
  return Scope::of_block(atomic.tid.block);
}

}  // namespace

LockInference infer_locks(const Trace& t) {
  LockInference out{t, {}};
  auto& events = out.trace.events;
  const GridShape& g = t.config;

  std::vector<std::vector<std::size_t>> perThread(g.thread_count());
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].has_thread() && g.contains(events[i].tid)) perThread[g.flat(events[i].tid)].push_back(i);

  for (const auto& seq : perThread) {
    std::map<LockId, bool> held;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      Event& e = events[seq[k]];
      if (e.kind != EventKind::Write || !e.atomic) continue;
      const Event* prev = k > 0 ? &t.events[seq[k - 1]] : nullptr;
      const Event* next = k + 1 < seq.size() ? &t.events[seq[k + 1]] : nullptr;
      bool fenceBefore = prev && prev->kind == EventKind::Fence;
      bool fenceAfter = next && next->kind == EventKind::Fence;
      const LockId lock = e.loc.addr;

      if (held[lock]) {
        if (fenceBefore) {
          Scope s = lock_scope(e, *prev);
          e = Event::release(e.tid, lock, s);
          held[lock] = false;
        }
      } else if (fenceAfter) {
        Scope s = lock_scope(e, *next);
        e = Event::acquire(e.tid, lock, s);
        held[lock] = true;
      } else if (fenceBefore) {
        out.diagnostics.push_back({seq[k], "release of a lock not held; left as an atomic access"});
      }
    }
  }
  return out;
}

LockInference analysis_trace(const Trace& t) {
  if (has_lock_events(t)) return LockInference{t, {}};
  return infer_locks(t);
}

}  // namespace gpurace
