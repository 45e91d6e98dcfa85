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

#ifndef GPURACE_REPORT_HPP
#define GPURACE_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gpurace/trace.hpp"

namespace gpurace {

enum class RaceKind : std::uint8_t { WW, WR, RW };
enum class RaceClass : std::uint8_t { Intrawarp, Interwarp, Interblock };

std::string_view to_string(RaceKind k);
std::string_view to_string(RaceClass c);

RaceClass classify(const ThreadId& a, const ThreadId& b);

struct AccessRef {
  std::size_t event = 0;
  ThreadId tid{};
  std::uint64_t instr = 0;

  bool operator==(const AccessRef&) const = default;
};

struct RaceReport {
  std::string detector;
  RaceKind kind = RaceKind::WW;
  Location loc{};
  AccessRef prior{};
  AccessRef current{};
  RaceClass cls = RaceClass::Interblock;
  std::string confidence;

  bool operator==(const RaceReport&) const = default;
};

// One JSON object, no trailing newline.
std::string to_json_line(const RaceReport& r);

// Collects reports for one detector run. Only the first race per location
// and ordered instruction pair is kept.
class RaceLog {
 public:
  explicit RaceLog(std::string detector, bool approximate = false)
      : detector_(std::move(detector)), approximate_(approximate) {}

  void report(RaceKind kind, const Location& loc, const AccessRef& prior, const AccessRef& current);

  const std::vector<RaceReport>& reports() const { return reports_; }
  std::vector<RaceReport> take() { return std::move(reports_); }

 private:
  std::string detector_;
  bool approximate_;
  std::set<std::tuple<Location, std::uint64_t, std::uint64_t>> seen_;
  std::vector<RaceReport> reports_;
};

}  // namespace gpurace

#endif  // GPURACE_REPORT_HPP
