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

#ifndef GPURACE_VCLOCK_HPP
#define GPURACE_VCLOCK_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gpurace/trace.hpp"

namespace gpurace {

/// Dense vector clock indexed by flat thread id. Entries past the end read
/// as zero; the width is fixed by the trace configuration.
class VectorClock {
 public:
  VectorClock() = default;
  explicit VectorClock(std::size_t width) : entries_(width, 0) {}
  VectorClock(std::initializer_list<Time> init) : entries_(init) {}

  static VectorClock zero(const GridShape& g) { return VectorClock(g.thread_count()); }

  std::size_t width() const { return entries_.size(); }
  Time get(std::uint32_t i) const { return i < entries_.size() ? entries_[i] : 0; }
  void set(std::uint32_t i, Time v);

  void join(const VectorClock& o);
  bool leq(const VectorClock& o) const;

  std::size_t materialized() const { return entries_.size(); }
  const std::vector<Time>& entries() const { return entries_; }

  bool operator==(const VectorClock&) const = default;

 private:
  std::vector<Time> entries_;
};

class WidthMismatch : public std::invalid_argument {
 public:
  WidthMismatch() : std::invalid_argument("vector clock width mismatch") {}
};

VectorClock vc_join(const VectorClock& a, const VectorClock& b);
bool vc_leq(const VectorClock& a, const VectorClock& b);

/// Last-access summary: one thread's local time. time == 0 means unset.
struct Epoch {
  Time time = 0;
  std::uint32_t tid = 0;  // flat thread id

  bool is_set() const { return time != 0; }
  static Epoch none() { return Epoch{}; }
  bool operator==(const Epoch&) const = default;
};

template <class Clock>
bool epoch_leq(const Epoch& e, const Clock& c) {
  return !e.is_set() || e.time <= c.get(e.tid);
}

}  // namespace gpurace

#endif  // GPURACE_VCLOCK_HPP
