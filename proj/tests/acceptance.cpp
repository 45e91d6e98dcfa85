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

// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--cli <path to gpurace>]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "gpurace/batch.hpp"
#include "gpurace/detect.hpp"
#include "gpurace/ptvc.hpp"
#include "gpurace/stats.hpp"
#include "gpurace/vclock.hpp"
#include "gpurace/workloads.hpp"

using namespace gpurace;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limitSeconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o = body();
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limitSeconds > 0 && secs > limitSeconds) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(limitSeconds)) + " s limit";
  }
  if (!o.pass) ++failures;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << buf << " s)"
            << std::endl;
}

std::string sweep_detail(const SweepResult& r) {
  std::string s = std::to_string(r.cases) + " traces, " + std::to_string(r.violations) + " violations, " +
                  std::to_string(r.skipped) + " skipped";
  if (!r.failingSeeds.empty()) s += ", first failing seed " + std::to_string(r.failingSeeds.front());
  return s;
}

Outcome verdict_matrix() {
  std::size_t mismatches = 0;
  std::ostringstream rows;
  for (const CorpusEntry& c : corpus()) {
    const Verdicts v = compute_verdicts(parse_trace(c.text), kCorpusOracleLimit);
    if (!(v == c.expected)) {
      ++mismatches;
      rows << " " << c.name;
    }
  }
  return {mismatches == 0, std::to_string(corpus().size()) + " traces, " + std::to_string(mismatches) +
                               " mismatches" + rows.str()};
}

Outcome soundness() {
  const SweepResult r = soundness_sweep(1, 10'000, RandomConfig{});
  return {r.violations == 0 && r.skipped == 0, sweep_detail(r)};
}

Outcome containment() {
  RandomConfig cfg;
  cfg.maxEvents = 30;
  const SweepResult r = containment_sweep(1, 1'000, cfg);
  return {r.violations == 0, sweep_detail(r)};
}

// Random set / join / barrier sequences on compressed clocks, each checked
// against dense vector clocks.
Outcome compression_fidelity() {
  std::mt19937_64 rng(2026);
  std::size_t ops = 0, configs = 0, bad = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (bad++ == 0) first = what;
  };
  for (std::uint32_t blocks = 1; blocks <= 4; ++blocks)
    for (std::uint32_t warps = 1; warps <= 4; ++warps)
      for (std::uint32_t lanes : {1u, 2u, 3u, 4u}) {
        const GridShape g{blocks, warps, lanes};
        const std::uint32_t n = g.thread_count();
        ++configs;
        std::vector<CompressedPTVC> pc(n, CompressedPTVC::zero(g));
        std::vector<VectorClock> dc(n, VectorClock::zero(g));
        auto agree = [&](std::uint32_t u, const char* op) {
          if (!(pc[u].dense() == dc[u])) fail(std::string(op) + " diverged");
        };
        for (int step = 0; step < 2'200; ++step, ++ops) {
          const std::uint32_t u = rng() % n;
          const int kind = static_cast<int>(rng() % 10);
          if (kind < 4) {
            const std::uint32_t idx = rng() % n;
            const Time v = pc[u].get(idx) + rng() % 3;
            pc[u].set(idx, v);
            dc[u].set(idx, v);
            agree(u, "set");
          } else if (kind < 8) {
            const std::uint32_t v = rng() % n;
            pc[u].join(pc[v]);
            dc[u].join(dc[v]);
            agree(u, "join");
          } else {
            std::vector<std::uint32_t> parts;
            const bool wholeBlock = kind == 9;
            const std::uint32_t b = rng() % blocks;
            if (wholeBlock) {
              for (std::uint32_t x = 0; x < g.threads_per_block(); ++x) parts.push_back(b * g.threads_per_block() + x);
            } else {
              for (std::uint32_t x = 0; x < n; ++x)
                if (rng() % 3 == 0) parts.push_back(x);
              if (parts.empty()) parts.push_back(u);
            }
            VectorClock plain = VectorClock::zero(g);
            for (std::uint32_t x : parts) plain.join(dc[x]);
            std::vector<CompressedPTVC*> ptrs;
            for (std::uint32_t x : parts) ptrs.push_back(&pc[x]);
            const Time top = forced_barrier_join(ptrs, parts);
            Time expectTop = 0;
            for (std::uint32_t x : parts) expectTop = std::max(expectTop, plain.get(x));
            if (top != expectTop) fail("barrier top");
            for (std::uint32_t x : parts) {
              const VectorClock d = pc[x].dense();
              if (!plain.leq(d)) fail("forced join below plain join");
              for (std::uint32_t y = 0; y < n; ++y) {
                const bool participant = std::find(parts.begin(), parts.end(), y) != parts.end();
                if (participant && d.get(y) != top) fail("participant column not constant");
                if (!participant && d.get(y) != plain.get(y)) fail("non-participant column changed");
              }
              if (wholeBlock && pc[x].blocks()[b].expanded) fail("whole-block barrier left the block expanded");
              dc[x] = d;
            }
          }
        }
      }
  std::string detail = std::to_string(ops) + " ops over " + std::to_string(configs) + " configs, " +
                       std::to_string(bad) + " failures";
  if (bad) detail += " (first: " + first + ")";
  return {bad == 0 && ops >= 100'000 && configs >= 50, detail};
}

Outcome transparency() {
  std::size_t bad = 0;
  for (const CorpusEntry& c : corpus())
    if (!transparency_holds(analysis_trace(parse_trace(c.text)).trace)) ++bad;
  RandomConfig cfg;
  cfg.maxEvents = 30;
  const SweepResult r = transparency_sweep(1, 1'000, cfg);
  return {bad == 0 && r.violations == 0,
          std::to_string(corpus().size()) + " corpus traces with " + std::to_string(bad) + " differences; " +
              sweep_detail(r)};
}

std::string all_json(const Trace& raw) {
  const Trace t = analysis_trace(raw).trace;
  std::string out;
  for (DetectorKind k : {DetectorKind::Gwcp, DetectorKind::Hb, DetectorKind::Lockset})
    for (const RaceReport& r : run_detector(k, t).reports) out += to_json_line(r) + "\n";
  out += stats_to_json(collect_stats(t), true) + "\n";
  return out;
}

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return "<popen failed>";
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  return out;
}

Outcome determinism(const std::string& cli) {
  std::size_t bad = 0, compared = 0;
  std::vector<std::string> first;
  for (const CorpusEntry& c : corpus()) first.push_back(all_json(parse_trace(c.text)));
  for (std::size_t i = corpus().size(); i-- > 0; ++compared)
    if (all_json(parse_trace(corpus()[i].text)) != first[i]) ++bad;
  std::string detail = "in-process: " + std::to_string(compared) + " traces, " + std::to_string(bad) + " differences";
  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path() / ("gpurace-accept-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::size_t cliBad = 0, cliRuns = 0;
    for (const CorpusEntry& c : corpus()) {
      const auto path = dir / (std::string(c.name) + ".trace");
      std::ofstream(path) << c.text;
      for (const char* args : {" check --json --detector gwcp ", " check --json --detector lockset ", " compare --json ",
                               " stats "}) {
        const std::string cmd = cli + args + path.string() + " 2>/dev/null";
        const std::string a = run_command(cmd), b = run_command(cmd);
        ++cliRuns;
        if (a != b || a.empty() && std::string(args).find("stats") != std::string::npos) ++cliBad;
      }
    }
    std::filesystem::remove_all(dir);
    bad += cliBad;
    detail += "; cli: " + std::to_string(cliRuns) + " command pairs, " + std::to_string(cliBad) + " differences";
  }
  return {bad == 0, detail};
}

Outcome warp_lock_stats() {
  const ClockStats s = collect_stats(analysis_trace(gen_litmus("warp-lock")).trace);
  const CompressionCounts& last = s.perEvent.back();
  return {last.warpExpanded == 0, "expanded warps at end: " + std::to_string(last.warpExpanded) +
                                      ", expanded blocks: " + std::to_string(last.blockExpanded) +
                                      ", peak entries: " + std::to_string(s.peakEntries)};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  criterion(1, "corpus verdict matrix", 10, verdict_matrix);
  criterion(2, "soundness over 10000 random traces", 600, soundness);
  criterion(3, "gwcp order contained in hb order", 0, containment);
  criterion(4, "compression fidelity", 0, compression_fidelity);
  criterion(5, "optimization transparency", 0, transparency);
  criterion(6, "deterministic json", 0, [&] { return determinism(cli); });
  criterion(7, "warp-lock ends with no expanded warps", 0, warp_lock_stats);
  return failures == 0 ? 0 : 1;
}
