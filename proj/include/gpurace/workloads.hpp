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

// Litmus corpus and random trace generator.

#ifndef GPURACE_WORKLOADS_HPP
#define GPURACE_WORKLOADS_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gpurace/trace.hpp"

namespace gpurace {

struct Verdicts {
  bool gwcp = false;
  bool hb = false;
  bool lockset = false;
  bool oracle = false;

  bool operator==(const Verdicts&) const = default;
};

struct CorpusEntry {
  std::string_view name;
  std::string_view summary;
  std::string_view text;  // trace file contents
  Verdicts expected;
};

std::span<const CorpusEntry> corpus();

class UnknownWorkload : public std::invalid_argument {
 public:
  explicit UnknownWorkload(std::string_view name)
      : std::invalid_argument("unknown corpus trace '" + std::string(name) + "'") {}
};

const CorpusEntry& corpus_entry(std::string_view name);
Trace gen_litmus(std::string_view name);

// Corpus oracle runs use this event cap instead of the interactive default.
constexpr std::size_t kCorpusOracleLimit = 40;

struct RandomConfig {
  std::uint32_t maxBlocks = 2;
  std::uint32_t maxWarps = 2;
  std::uint32_t maxLanes = 2;
  std::uint32_t maxEvents = 12;
  std::uint32_t locks = 2;
  std::uint32_t locations = 3;
};

// Deterministic in (seed, cfg). The result validates, and no thread ever
// holds more than one lock.
Trace gen_random(std::uint64_t seed, const RandomConfig& cfg = {});

}  // namespace gpurace

#endif  // GPURACE_WORKLOADS_HPP
