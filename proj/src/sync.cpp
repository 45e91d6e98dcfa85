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

#include "gpurace/sync.hpp"

namespace gpurace {

bool scopes_overlap(const ScopedLockInstance& a, const ScopedLockInstance& b) {
  if (a.lock != b.lock) throw std::invalid_argument("scopes_overlap: different locks");
  return a.scope.is_device() || b.scope.is_device() || a.scope.block == b.scope.block;
}

bool atomics_cover(const AccessAttr& a, const AccessAttr& b, const ThreadId& tidA,
                   const ThreadId& tidB) {
  if (!a.atomic || !b.atomic) return false;
  return a.scope.is_device() || b.scope.is_device() || tidA.block == tidB.block;
}

bool hb_release_acquire_applies(const Scope& releaseScope, const Scope& acquireScope,
                                const ThreadId& relTid, const ThreadId& acqTid) {
  if (releaseScope.is_device() || acquireScope.is_device()) return true;
  return relTid.block == acqTid.block;
}

bool fence_covers(const Scope& fenceScope, const ThreadId& fencer, const ThreadId& other) {
  return fenceScope.is_device() || fencer.block == other.block;
}

}  // namespace gpurace
