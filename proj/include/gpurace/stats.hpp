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

// Clock compression counters.

#ifndef GPURACE_STATS_HPP
#define GPURACE_STATS_HPP

#include <string>

#include "gpurace/detect.hpp"

namespace gpurace {

// Runs a vector-clock detector (gwcp or hb) with counters enabled.
ClockStats collect_stats(const Trace& t, DetectorKind k = DetectorKind::Gwcp, DetectorOptions opt = {});

// One JSON object: the counters after the last event, the peak number of
// materialized entries, and optionally the per-event series.
std::string stats_to_json(const ClockStats& s, bool perEvent = false);

}  // namespace gpurace

#endif  // GPURACE_STATS_HPP
