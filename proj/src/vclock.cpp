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

#include "gpurace/vclock.hpp"

#include <algorithm>

namespace gpurace {

void VectorClock::set(std::uint32_t i, Time v) {
  if (i >= entries_.size()) throw std::out_of_range("vector clock index out of range");
  entries_[i] = v;
}

void VectorClock::join(const VectorClock& o) {
  if (o.entries_.size() != entries_.size()) throw WidthMismatch();
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = std::max(entries_[i], o.entries_[i]);
}

bool VectorClock::leq(const VectorClock& o) const {
  if (o.entries_.size() != entries_.size()) throw WidthMismatch();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] > o.entries_[i]) return false;
  return true;
}

VectorClock vc_join(const VectorClock& a, const VectorClock& b) {
  VectorClock r = a;
  r.join(b);
  return r;
}

bool vc_leq(const VectorClock& a, const VectorClock& b) { return a.leq(b); }

}  // namespace gpurace
