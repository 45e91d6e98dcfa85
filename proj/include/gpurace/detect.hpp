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

// Entry points of the three trace-driven detectors.

#ifndef GPURACE_DETECT_HPP
#define GPURACE_DETECT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpurace/ptvc.hpp"
#include "gpurace/report.hpp"
#include "gpurace/trace.hpp"

namespace gpurace {

enum class DetectorKind { Gwcp, Hb, Lockset };

std::string_view to_string(DetectorKind k);
std::optional<DetectorKind> detector_from_string(std::string_view s);

struct DetectorOptions {
  bool compress = true;          // hierarchical clocks + forced barrier compression
  bool inactiveOpt = true;       // shared lock queues for threads that never locked
  bool orderMatrix = false;      // record the pairwise order relation
  bool collectStats = false;     // per-event compression counters
  bool warpGranularity = false;  // lockset only: collapse lanes to their warp
};

// Pairwise order over trace events: at(i, j) for i < j tells whether event i
// is ordered before event j. Rows and columns of barrier events are not
// tracked.
class OrderMatrix {
 public:
  enum Cell : std::int8_t { NotTracked = -1, Unordered = 0, Ordered = 1 };

  OrderMatrix() = default;
  explicit OrderMatrix(std::size_t n) : n_(n), cells_(n * n, NotTracked) {}

  std::size_t size() const { return n_; }
  Cell at(std::size_t i, std::size_t j) const { return static_cast<Cell>(cells_[i * n_ + j]); }
  void set(std::size_t i, std::size_t j, Cell c) { cells_[i * n_ + j] = c; }

  bool operator==(const OrderMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int8_t> cells_;
};

struct ClockStats {
  std::vector<CompressionCounts> perEvent;  // thread clocks after each event
  std::size_t peakEntries = 0;              // every clock the detector holds
};

struct DetectionResult {
  std::vector<RaceReport> reports;
  std::vector<Diagnostic> diagnostics;
  std::optional<OrderMatrix> order;
  std::optional<ClockStats> stats;
};

// The trace must be valid (see validate_trace); lock misuse found while
// running is reported as diagnostics and the offending event is skipped.
DetectionResult run_gwcp(const Trace& t, const DetectorOptions& opt = {});
DetectionResult run_hb(const Trace& t, const DetectorOptions& opt = {});
DetectionResult run_lockset(const Trace& t, const DetectorOptions& opt = {});

DetectionResult run_detector(DetectorKind k, const Trace& t, const DetectorOptions& opt = {});

constexpr std::size_t kOrderMatrixMaxEvents = 50;

}  // namespace gpurace

#endif  // GPURACE_DETECT_HPP
