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

// Scope rules shared by every detector and the reordering oracle.

#ifndef GPURACE_SYNC_HPP
#define GPURACE_SYNC_HPP

#include <stdexcept>

#include "gpurace/trace.hpp"

namespace gpurace {

// A lock taken at a particular scope. Block-scoped instances of one lock in
// different blocks are distinct locks.
struct ScopedLockInstance {
  LockId lock = 0;
  Scope scope{};

  bool operator==(const ScopedLockInstance& o) const { return lock == o.lock && scope == o.scope; }
};

struct AccessAttr {
  bool atomic = false;
  Scope scope{};

  static AccessAttr of(const Event& e) { return AccessAttr{e.atomic, e.scope}; }
};

// Whether two critical sections on the same lock exclude each other.
// Throws std::invalid_argument for different locks.
bool scopes_overlap(const ScopedLockInstance& a, const ScopedLockInstance& b);

// True when both accesses are atomics whose scope covers both threads, i.e.
// the pair must not be reported.
bool atomics_cover(const AccessAttr& a, const AccessAttr& b, const ThreadId& tidA,
                   const ThreadId& tidB);

// Scoped happens-before: does a release at releaseScope order a later acquire
// at acquireScope on the same sync variable?
bool hb_release_acquire_applies(const Scope& releaseScope, const Scope& acquireScope,
                                const ThreadId& relTid, const ThreadId& acqTid);

// Does a fence issued by `fencer` order its earlier accesses for `other`?
bool fence_covers(const Scope& fenceScope, const ThreadId& fencer, const ThreadId& other);

}  // namespace gpurace

#endif  // GPURACE_SYNC_HPP
