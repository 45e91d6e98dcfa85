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
#include <optional>
#include <random>

#include "gpurace/sync.hpp"
#include "gpurace/workloads.hpp"

namespace gpurace {

namespace {

// mt19937_64 output is fully specified; the standard distributions are not,
// so bounded draws are done by hand to keep traces identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(g_() % n); }
  bool chance(std::uint32_t percent) { return below(100) < percent; }

 private:
  std::mt19937_64 g_;
};

}  // namespace

Trace gen_random(std::uint64_t seed, const RandomConfig& cfg) {
  Rng rng(seed);
  Trace t;
  GridShape& g = t.config;
  g.blocks = 1 + rng.below(std::max(1u, cfg.maxBlocks));
  g.warpsPerBlock = 1 + rng.below(std::max(1u, cfg.maxWarps));
  g.warpSize = 1 + rng.below(std::max(1u, cfg.maxLanes));
  const std::uint32_t threads = g.thread_count();
  if (threads < 2 && g.blocks < std::max(1u, cfg.maxBlocks)) g.blocks += 1;

  const std::uint32_t total = 2 + rng.below(std::max(1u, cfg.maxEvents - 1));
  std::vector<std::optional<ScopedLockInstance>> held(g.thread_count());
  std::uint32_t holding = 0;

  auto lock_free = [&](std::uint32_t self, const ScopedLockInstance& want) {
    for (std::uint32_t u = 0; u < held.size(); ++u)
      if (u != self && held[u] && held[u]->lock == want.lock && scopes_overlap(*held[u], want)) return false;
    return true;
  };

  while (t.events.size() + holding < total) {
    const std::uint32_t f = rng.below(g.thread_count());
    const ThreadId tid = g.tid(f);
    const std::uint32_t roll = rng.below(100);

    if (held[f] && roll < 30) {
      t.events.push_back(Event::release(tid, held[f]->lock, held[f]->scope));
      held[f].reset();
      --holding;
      continue;
    }
    if (!held[f] && cfg.locks > 0 && roll < 20 && t.events.size() + holding + 2 <= total) {
      ScopedLockInstance want{1 + rng.below(cfg.locks), rng.chance(50) ? Scope::device() : Scope::of_block(tid.block)};
      if (lock_free(f, want)) {
        t.events.push_back(Event::acquire(tid, want.lock, want.scope));
        held[f] = want;
        ++holding;
        continue;
      }
    }
    if (roll >= 90) {
      if (rng.chance(50)) {
        t.events.push_back(Event::fence(tid, rng.chance(50) ? Scope::device() : Scope::of_block(tid.block)));
      } else if (rng.chance(50)) {
        t.events.push_back(Event::block_barrier(tid.block));
      } else {
        LaneMask mask = (LaneMask{1} << tid.lane) | (rng.below(1u << std::min(g.warpSize, 16u)) & g.full_mask());
        t.events.push_back(Event::warp_barrier(tid.block, tid.warp, mask));
      }
      continue;
    }

    const std::uint64_t addr = 0x10 * (1 + rng.below(std::max(1u, cfg.locations)));
    const Location loc = rng.chance(20) ? Location::shared(tid.block, addr) : Location::global(addr);
    const std::uint64_t instr = 1 + rng.below(6);
    Event e = rng.chance(50) ? Event::write(tid, loc, instr) : Event::read(tid, loc, instr);
    if (rng.chance(20)) {
      e.atomic = true;
      e.scope = rng.chance(50) ? Scope::device() : Scope::of_block(tid.block);
    }
    t.events.push_back(e);
  }

  for (std::uint32_t u = 0; u < held.size(); ++u)
    if (held[u]) t.events.push_back(Event::release(g.tid(u), held[u]->lock, held[u]->scope));
  return t;
}

}  // namespace gpurace
