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

#include "gpurace/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpurace/sync.hpp"

namespace gpurace {

namespace {

constexpr std::int16_t kInitial = -1;

class Search {
 public:
  Search(const Trace& t, std::size_t budget) : t_(t), budget_(budget) {
    const GridShape& g = t.config;
    const auto parts = barrier_participants(t);
    std::map<std::uint32_t, std::size_t> threadIndex;
    auto thread_of = [&](std::uint32_t flat) {
      auto [it, fresh] = threadIndex.try_emplace(flat, seq_.size());
      if (fresh) seq_.emplace_back();
      return it->second;
    };

    std::map<Location, std::int16_t> lastWrite;
    origWriter_.assign(t.events.size(), kInitial);
    for (std::size_t i = 0; i < t.events.size(); ++i) {
      const Event& e = t.events[i];
      if (e.kind == EventKind::Barrier) {
        for (std::uint32_t u : parts[i]) seq_[thread_of(u)].push_back(i);
        continue;
      }
      if (e.kind == EventKind::End || e.kind == EventKind::Fence || !g.contains(e.tid)) continue;
      seq_[thread_of(g.flat(e.tid))].push_back(i);
      if (!e.is_access()) continue;
      if (!locIndex_.count(e.loc)) locIndex_.emplace(e.loc, static_cast<std::uint32_t>(locIndex_.size()));
      if (e.is_write()) {
        lastWrite[e.loc] = static_cast<std::int16_t>(i);
      } else {
        auto it = lastWrite.find(e.loc);
        origWriter_[i] = it == lastWrite.end() ? kInitial : it->second;
      }
    }

    held_.resize(seq_.size());
    for (std::size_t u = 0; u < seq_.size(); ++u) {
      std::vector<ScopedLockInstance> cur;
      for (std::size_t c = 0; c <= seq_[u].size(); ++c) {
        held_[u].push_back(cur);
        if (c == seq_[u].size()) break;
        const Event& e = t.events[seq_[u][c]];
        if (e.kind == EventKind::Acquire) {
          cur.push_back({e.lock, e.scope});
        } else if (e.kind == EventKind::Release) {
          auto it = std::find_if(cur.rbegin(), cur.rend(), [&](const auto& h) { return h.lock == e.lock; });
          if (it != cur.rend()) cur.erase(std::next(it).base());
        }
      }
    }
  }

  OracleResult run() {
    cursor_.assign(seq_.size(), 0);
    writer_.assign(locIndex_.size(), kInitial);
    dfs();
    out_.states = visited_.size();
    return std::move(out_);
  }

 private:
  std::string key() const {
    std::string k(cursor_.begin(), cursor_.end());
    for (std::int16_t w : writer_) {
      k.push_back(static_cast<char>(w & 0xff));
      k.push_back(static_cast<char>((w >> 8) & 0xff));
    }
    return k;
  }

  const Event* next(std::size_t u) const {
    return cursor_[u] < seq_[u].size() ? &t_.events[seq_[u][cursor_[u]]] : nullptr;
  }
  std::size_t next_index(std::size_t u) const { return seq_[u][cursor_[u]]; }

  void record_races() {
    for (std::size_t u = 0; u < seq_.size(); ++u) {
      const Event* a = next(u);
      if (!a || !a->is_access()) continue;
      for (std::size_t v = u + 1; v < seq_.size(); ++v) {
        const Event* b = next(v);
        if (!b || !b->is_access() || !(a->loc == b->loc)) continue;
        if (!a->is_write() && !b->is_write()) continue;
        if (atomics_cover(AccessAttr::of(*a), AccessAttr::of(*b), a->tid, b->tid)) continue;
        std::size_t i = next_index(u), j = next_index(v);
        out_.pairs.emplace(std::min(i, j), std::max(i, j));
      }
    }
  }

  bool lock_free(std::size_t u, const Event& e) const {
    const ScopedLockInstance want{e.lock, e.scope};
    for (std::size_t v = 0; v < seq_.size(); ++v) {
      if (v == u) continue;
      for (const auto& h : held_[v][cursor_[v]])
        if (h.lock == e.lock && scopes_overlap(h, want)) return false;
    }
    return true;
  }

  // Threads whose next event is barrier event `i`, or empty if some
  // participant has not reached it yet.
  std::vector<std::size_t> barrier_ready(std::size_t i) const {
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < seq_.size(); ++v) {
      bool takesPart = std::find(seq_[v].begin(), seq_[v].end(), i) != seq_[v].end();
      if (!takesPart) continue;
      if (cursor_[v] >= seq_[v].size() || next_index(v) != i) return {};
      ready.push_back(v);
    }
    return ready;
  }

  void dfs() {
    if (out_.incomplete) return;
    if (!visited_.insert(key()).second) return;
    if (visited_.size() >= budget_) {
      out_.incomplete = true;
      return;
    }
    record_races();

    for (std::size_t u = 0; u < seq_.size(); ++u) {
      const Event* e = next(u);
      if (!e) continue;
      const std::size_t i = next_index(u);
      switch (e->kind) {
        case EventKind::Barrier: {
          auto ready = barrier_ready(i);
          if (ready.empty() || ready.front() != u) break;  // taken once, by its first participant
          for (std::size_t v : ready) ++cursor_[v];
          dfs();
          for (std::size_t v : ready) --cursor_[v];
          break;
        }
        case EventKind::Acquire:
          if (!lock_free(u, *e)) break;
          ++cursor_[u];
          dfs();
          --cursor_[u];
          break;
        case EventKind::Read:
        case EventKind::Write: {
          std::int16_t& w = writer_[locIndex_.at(e->loc)];
          if (e->kind == EventKind::Read && !e->atomic && w != origWriter_[i]) break;
          const std::int16_t saved = w;
          if (e->is_write()) w = static_cast<std::int16_t>(i);
          ++cursor_[u];
          dfs();
          --cursor_[u];
          w = saved;
          break;
        }
        default:
          ++cursor_[u];
          dfs();
          --cursor_[u];
          break;
      }
      if (out_.incomplete) return;
    }
  }

  const Trace& t_;
  std::size_t budget_;
  std::vector<std::vector<std::size_t>> seq_;
  std::vector<std::vector<std::vector<ScopedLockInstance>>> held_;
  std::map<Location, std::uint32_t> locIndex_;
  std::vector<std::int16_t> origWriter_;

  std::vector<std::uint8_t> cursor_;
  std::vector<std::int16_t> writer_;
  std::unordered_set<std::string> visited_;
  OracleResult out_;
};

}  // namespace

OracleResult predictable_races(const Trace& t, std::size_t limit, std::size_t budget) {
  if (t.events.size() > limit)
    throw std::length_error("trace has " + std::to_string(t.events.size()) + " events; oracle limit is " +
                            std::to_string(limit));
  if (t.events.size() > 255) throw std::length_error("oracle supports at most 255 events");
  return Search(t, budget).run();
}

}  // namespace gpurace
