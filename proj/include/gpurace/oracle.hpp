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

// Ground truth for small traces: exhaustive search over correct reorderings.

#ifndef GPURACE_ORACLE_HPP
#define GPURACE_ORACLE_HPP

#include <cstddef>
#include <set>
#include <utility>

#include "gpurace/trace.hpp"

namespace gpurace {

constexpr std::size_t kOracleDefaultLimit = 20;
constexpr std::size_t kOracleDefaultBudget = 10'000'000;

struct OracleResult {
  // Unordered event-index pairs, stored as (smaller, larger).
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  bool incomplete = false;  // state budget exhausted
  std::size_t states = 0;

  bool racy() const { return !pairs.empty(); }
};

// Conflicting accesses of two threads that some correct reordering makes the
// next event of their threads at the same time. A correct reordering keeps
// per-thread order, mutual exclusion of overlapping lock instances, barriers
// as joint steps, and the writer observed by every non-atomic read; any
// suffix of any thread may be left out.
//
// Throws std::length_error when the trace has more than `limit` events.
OracleResult predictable_races(const Trace& t, std::size_t limit = kOracleDefaultLimit,
                               std::size_t budget = kOracleDefaultBudget);

}  // namespace gpurace

#endif  // GPURACE_ORACLE_HPP
