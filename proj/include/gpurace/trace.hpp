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

#ifndef GPURACE_TRACE_HPP
#define GPURACE_TRACE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpurace {

using Time = std::uint32_t;
using LockId = std::uint64_t;
using LaneMask = std::uint64_t;

constexpr std::uint32_t kMaxWarpSize = 64;

struct ThreadId {
  std::uint32_t block = 0;
  std::uint32_t warp = 0;
  std::uint32_t lane = 0;

  auto operator<=>(const ThreadId&) const = default;

  bool same_warp(const ThreadId& o) const { return block == o.block && warp == o.warp; }
};

std::string to_string(const ThreadId& t);

// Kernel launch geometry, flattened to one dimension per level.
struct GridShape {
  std::uint32_t blocks = 1;
  std::uint32_t warpsPerBlock = 1;
  std::uint32_t warpSize = 32;

  std::uint32_t threads_per_block() const { return warpsPerBlock * warpSize; }
  std::uint32_t thread_count() const { return blocks * threads_per_block(); }

  bool contains(const ThreadId& t) const {
    return t.block < blocks && t.warp < warpsPerBlock && t.lane < warpSize;
  }
  std::uint32_t flat(const ThreadId& t) const {
    return (t.block * warpsPerBlock + t.warp) * warpSize + t.lane;
  }
  ThreadId tid(std::uint32_t flat) const {
    return ThreadId{flat / threads_per_block(), (flat / warpSize) % warpsPerBlock, flat % warpSize};
  }
  LaneMask full_mask() const {
    return warpSize == 64 ? ~LaneMask{0} : ((LaneMask{1} << warpSize) - 1);
  }

  bool operator==(const GridShape&) const = default;
};

enum class ScopeKind : std::uint8_t { Block, Device };

// Visibility of a synchronization operation. A block scope remembers the
// block of the issuing thread; system scope is folded into Device.
struct Scope {
  ScopeKind kind = ScopeKind::Device;
  std::uint32_t block = 0;

  static Scope device() { return Scope{ScopeKind::Device, 0}; }
  static Scope of_block(std::uint32_t b) { return Scope{ScopeKind::Block, b}; }

  bool is_device() const { return kind == ScopeKind::Device; }
  bool operator==(const Scope& o) const {
    return kind == o.kind && (kind == ScopeKind::Device || block == o.block);
  }
};

enum class Space : std::uint8_t { Global, Shared };

// Shared memory is private to a block, so the owning block is part of the
// location identity.
struct Location {
  Space space = Space::Global;
  std::uint32_t block = 0;
  std::uint64_t addr = 0;

  static Location global(std::uint64_t a) { return Location{Space::Global, 0, a}; }
  static Location shared(std::uint32_t b, std::uint64_t a) { return Location{Space::Shared, b, a}; }

  bool operator==(const Location&) const = default;
  auto operator<=>(const Location&) const = default;
};

struct LocationHash {
  std::size_t operator()(const Location& l) const noexcept {
    std::uint64_t h = l.addr * 0x9E3779B97F4A7C15ull;
    h ^= (static_cast<std::uint64_t>(l.block) << 1 | static_cast<std::uint64_t>(l.space)) +
         0x7F4A7C15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

enum class EventKind : std::uint8_t { Read, Write, Acquire, Release, Barrier, Fence, End };
enum class BarrierKind : std::uint8_t { Block, Warp };

std::string_view to_string(EventKind k);

constexpr std::uint32_t kNoRecord = std::numeric_limits<std::uint32_t>::max();

struct Event {
  EventKind kind = EventKind::Read;
  ThreadId tid{};  // unused for barriers

  // Read / Write
  Location loc{};
  bool atomic = false;
  std::uint64_t instr = 0;
  std::uint32_t record = kNoRecord;  // coalesced warp record this lane came from

  // Atomic access, Acquire / Release, Fence
  Scope scope{};
  LockId lock = 0;

  // Barrier
  BarrierKind barrier = BarrierKind::Block;
  std::uint32_t barBlock = 0;
  std::uint32_t barWarp = 0;
  LaneMask mask = 0;                    // warp barrier participants
  std::vector<LaneMask> warpMasks;      // optional explicit block barrier participants

  bool is_access() const { return kind == EventKind::Read || kind == EventKind::Write; }
  bool is_write() const { return kind == EventKind::Write; }
  bool has_thread() const { return kind != EventKind::Barrier; }

  bool operator==(const Event&) const = default;

  static Event read(ThreadId t, Location l, std::uint64_t instr = 0);
  static Event write(ThreadId t, Location l, std::uint64_t instr = 0);
  static Event atomic_read(ThreadId t, Location l, Scope s, std::uint64_t instr = 0);
  static Event atomic_write(ThreadId t, Location l, Scope s, std::uint64_t instr = 0);
  static Event acquire(ThreadId t, LockId l, Scope s);
  static Event release(ThreadId t, LockId l, Scope s);
  static Event fence(ThreadId t, Scope s);
  static Event end(ThreadId t);
  static Event block_barrier(std::uint32_t block);
  static Event warp_barrier(std::uint32_t block, std::uint32_t warp, LaneMask mask);
};

struct Trace {
  GridShape config;
  std::vector<Event> events;

  bool operator==(const Trace&) const = default;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Trace parse_trace(std::istream& in);
Trace parse_trace(std::string_view text);

// Canonical text form. Consecutive events sharing a coalesced record id are
// written back as one `wacc` line.
std::string write_trace(const Trace& t);

struct Diagnostic {
  std::size_t event = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

std::vector<Diagnostic> validate_trace(const Trace& t);

struct LockInference {
  Trace trace;
  std::vector<Diagnostic> diagnostics;
};

// Rewrites the ad-hoc lock idiom (atomic write then fence = acquire, fence
// then atomic write = release) into explicit lock events.
LockInference infer_locks(const Trace& t);

// The trace the detectors analyse: lock operations are inferred from
// atomic/fence idioms when the trace has no explicit acquire or release.
LockInference analysis_trace(const Trace& t);

bool has_lock_events(const Trace& t);

// Flat ids of the threads taking part in each barrier event (empty for all
// other events). Block barriers cover every thread of the block that has not
// ended, unless explicit warp masks are given.
std::vector<std::vector<std::uint32_t>> barrier_participants(const Trace& t);

}  // namespace gpurace

#endif  // GPURACE_TRACE_HPP
