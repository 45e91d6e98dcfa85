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

#include "gpurace/stats.hpp"

#include <stdexcept>

#include "json.hpp"

namespace gpurace {

namespace {

nlohmann::ordered_json counts_json(const CompressionCounts& c) {
  nlohmann::ordered_json j;
  j["blocks_compressed"] = c.blockCompressed;
  j["blocks_expanded"] = c.blockExpanded;
  j["warps_compressed"] = c.warpCompressed;
  j["warps_expanded"] = c.warpExpanded;
  j["entries"] = c.entries;
  return j;
}

}  // namespace

ClockStats collect_stats(const Trace& t, DetectorKind k, DetectorOptions opt) {
  if (k == DetectorKind::Lockset) throw std::invalid_argument("the lockset detector keeps no clocks");
  opt.collectStats = true;
  return *run_detector(k, t, opt).stats;
}

std::string stats_to_json(const ClockStats& s, bool perEvent) {
  nlohmann::ordered_json j;
  j["events"] = s.perEvent.size();
  j["final"] = counts_json(s.perEvent.empty() ? CompressionCounts{} : s.perEvent.back());
  j["peak_entries"] = s.peakEntries;
  if (perEvent) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : s.perEvent) arr.push_back(counts_json(c));
    j["per_event"] = std::move(arr);
  }
  return j.dump();
}

}  // namespace gpurace
