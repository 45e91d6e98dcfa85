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

// Property sweeps over many independent traces. Each sweep has an OpenMP
// version and a serial reference; both return the same result.

#ifndef GPURACE_BATCH_HPP
#define GPURACE_BATCH_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gpurace/oracle.hpp"
#include "gpurace/workloads.hpp"

namespace gpurace {

// Runs all four analyses on the lock-inferred form of `raw`. The oracle
// verdict is false when the trace exceeds `oracleLimit`.
Verdicts compute_verdicts(const Trace& raw, std::size_t oracleLimit = kOracleDefaultLimit);

struct SweepResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;                 // e.g. oracle budget exhausted
  std::vector<std::uint64_t> failingSeeds;  // ascending

  bool operator==(const SweepResult&) const = default;
};

enum class Execution { Serial, Parallel };

// gwcp reports a race => the oracle finds a predictable race.
SweepResult soundness_sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg,
                            Execution ex = Execution::Parallel);

// gwcp-ordered => scoped-HB-ordered, for every event pair.
SweepResult containment_sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg,
                              Execution ex = Execution::Parallel);

// Report sequences do not depend on clock compression or the inactive-thread
// queue sharing.
SweepResult transparency_sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg,
                               Execution ex = Execution::Parallel);

// Single-trace checks behind the sweeps; true means the property holds.
bool soundness_holds(const Trace& t, bool* skipped = nullptr);
bool containment_holds(const Trace& t);
bool transparency_holds(const Trace& t);

}  // namespace gpurace

#endif  // GPURACE_BATCH_HPP
