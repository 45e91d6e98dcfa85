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

#include "gpurace/batch.hpp"

#include <algorithm>

#include "gpurace/detect.hpp"

namespace gpurace {

Verdicts compute_verdicts(const Trace& raw, std::size_t oracleLimit) {
  const Trace t = analysis_trace(raw).trace;
  Verdicts v;
  v.gwcp = !run_gwcp(t).reports.empty();
  v.hb = !run_hb(t).reports.empty();
  v.lockset = !run_lockset(t).reports.empty();
  if (t.events.size() <= oracleLimit) v.oracle = predictable_races(t, oracleLimit).racy();
  return v;
}

bool soundness_holds(const Trace& t, bool* skipped) {
  if (skipped) *skipped = false;
  if (run_gwcp(t).reports.empty()) return true;
  OracleResult o = predictable_races(t, std::max(kOracleDefaultLimit, t.events.size()));
  if (o.racy()) return true;
  if (o.incomplete) {
    if (skipped) *skipped = true;
    return true;
  }
  return false;
}

bool containment_holds(const Trace& t) {
  DetectorOptions opt;
  opt.orderMatrix = true;
  const OrderMatrix g = *run_gwcp(t, opt).order;
  const OrderMatrix h = *run_hb(t, opt).order;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.at(i, j) == OrderMatrix::Ordered && h.at(i, j) != OrderMatrix::Ordered) return false;
  return true;
}

bool transparency_holds(const Trace& t) {
  const auto base = run_gwcp(t).reports;
  for (bool compress : {true, false})
    for (bool inactive : {true, false}) {
      DetectorOptions opt;
      opt.compress = compress;
      opt.inactiveOpt = inactive;
      if (run_gwcp(t, opt).reports != base) return false;
    }
  DetectorOptions dense;
  dense.compress = false;
  return run_hb(t).reports == run_hb(t, dense).reports;
}

namespace {

enum class Outcome : std::uint8_t { Pass, Fail, Skip };

template <class Check>
SweepResult sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg, Execution ex,
                  Check check) {
  std::vector<Outcome> out(count, Outcome::Pass);
  auto one = [&](std::size_t k) { out[k] = check(gen_random(firstSeed + k, cfg)); };
  if (ex == Execution::Parallel) {
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < count; ++k) one(k);
  }

  SweepResult r;
  r.cases = count;
  for (std::size_t k = 0; k < count; ++k) {
    if (out[k] == Outcome::Skip) ++r.skipped;
    if (out[k] != Outcome::Fail) continue;
    ++r.violations;
    r.failingSeeds.push_back(firstSeed + k);
  }
  return r;
}

Outcome outcome(bool holds) { return holds ? Outcome::Pass : Outcome::Fail; }

}  // namespace

SweepResult soundness_sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg,
                            Execution ex) {
  return sweep(firstSeed, count, cfg, ex, [](const Trace& t) {
    bool skipped = false;
    bool ok = soundness_holds(t, &skipped);
    return skipped ? Outcome::Skip : outcome(ok);
  });
}

SweepResult containment_sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg,
                              Execution ex) {
  return sweep(firstSeed, count, cfg, ex, [](const Trace& t) { return outcome(containment_holds(t)); });
}

SweepResult transparency_sweep(std::uint64_t firstSeed, std::size_t count, const RandomConfig& cfg,
                               Execution ex) {
  return sweep(firstSeed, count, cfg, ex, [](const Trace& t) { return outcome(transparency_holds(t)); });
}

}  // namespace gpurace
