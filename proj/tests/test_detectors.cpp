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

#include <algorithm>

#include "doctest.h"
#include "gpurace/detect.hpp"
#include "gpurace/stats.hpp"
#include "gpurace/workloads.hpp"

using namespace gpurace;

namespace {

Trace parse(std::string_view config, std::string_view body) {
  return parse_trace(std::string(config) + "\n" + std::string(body));
}

constexpr std::string_view k2Blocks = "config blocks=2 warps=1 lanes=1";
constexpr std::string_view k3Blocks = "config blocks=3 warps=1 lanes=1";
constexpr std::string_view kOneWarp = "config blocks=1 warps=1 lanes=4";

std::vector<RaceReport> races(DetectorKind k, const Trace& t, DetectorOptions opt = {}) {
  return run_detector(k, analysis_trace(t).trace, opt).reports;
}

bool racy(DetectorKind k, const Trace& t, DetectorOptions opt = {}) { return !races(k, t, opt).empty(); }

const DetectorKind kClockDetectors[] = {DetectorKind::Gwcp, DetectorKind::Hb};
const DetectorKind kAll[] = {DetectorKind::Gwcp, DetectorKind::Hb, DetectorKind::Lockset};

}  // namespace

TEST_SUITE("gwcp") {
  TEST_CASE("no-cp: H covers the release, P does not cover the first write") {
    Trace t = gen_litmus("no-cp");
    auto r = races(DetectorKind::Gwcp, t);
    REQUIRE(r.size() == 1);
    CHECK(r[0].kind == RaceKind::WR);
    CHECK(r[0].loc == Location::global(0x10));
    CHECK(r[0].prior.event == 0);
    CHECK(r[0].current.event == 5);
    CHECK(r[0].cls == RaceClass::Interblock);
    CHECK(r[0].confidence == "first-race");
    CHECK(r[0].detector == "gwcp");
  }

  TEST_CASE("conflicting critical sections order the release before the later access") {
    // CS1 writes x, CS2 reads x: the read's thread learns the release.
    Trace t = parse(k2Blocks,
                    "0.0.0 acq 1 device\n0.0.0 wr g:1\n0.0.0 rel 1 device\n"
                    "1.0.0 acq 1 device\n1.0.0 rd g:1\n1.0.0 rel 1 device\n");
    DetectorOptions opt;
    opt.orderMatrix = true;
    DetectionResult r = run_gwcp(t, opt);
    CHECK(r.reports.empty());
    const OrderMatrix& m = *r.order;
    CHECK(m.at(2, 4) == OrderMatrix::Ordered);  // release before the conflicting read
    CHECK(m.at(1, 4) == OrderMatrix::Ordered);
    CHECK(m.at(2, 3) == OrderMatrix::Unordered);  // but not before the acquire
    CHECK(m.at(0, 1) == OrderMatrix::Ordered);    // program order
  }

  TEST_CASE("block-scoped release in another block gives no edge") {
    Trace t = parse(k2Blocks,
                    "0.0.0 wr g:1\n0.0.0 acq 1 block\n0.0.0 rel 1 block\n"
                    "1.0.0 acq 1 block\n1.0.0 rel 1 block\n1.0.0 wr g:1\n");
    CHECK(racy(DetectorKind::Gwcp, t));
    CHECK(racy(DetectorKind::Hb, t));
  }

  TEST_CASE("device-scoped access lookups see block-scoped critical sections") {
    // A block instance and a device instance overlap: the device CS reading x
    // learns of the block CS that wrote it.
    Trace t = parse("config blocks=1 warps=2 lanes=1",
                    "0.0.0 acq 1 block\n0.0.0 wr g:1\n0.0.0 rel 1 block\n"
                    "0.1.0 acq 1 device\n0.1.0 rd g:1\n0.1.0 rel 1 device\n");
    DetectorOptions opt;
    opt.orderMatrix = true;
    DetectionResult r = run_gwcp(t, opt);
    CHECK(r.reports.empty());
    CHECK(r.order->at(2, 4) == OrderMatrix::Ordered);
  }

  TEST_CASE("queue rule orders releases whose acquires are ordered") {
    // T1 learns T0's acquire of lock 1 through the conflict on y under lock
    // 2, so T0's release of lock 1 precedes T1's own section on lock 1.
    Trace t = parse(k2Blocks,
                    "0.0.0 acq 1 device\n"   // 0
                    "0.0.0 acq 2 device\n"   // 1
                    "0.0.0 wr g:2\n"         // 2
                    "0.0.0 rel 2 device\n"   // 3
                    "0.0.0 rel 1 device\n"   // 4
                    "1.0.0 acq 2 device\n"   // 5
                    "1.0.0 rd g:2\n"         // 6
                    "1.0.0 rel 2 device\n"   // 7
                    "1.0.0 acq 1 device\n"   // 8
                    "1.0.0 rel 1 device\n");  // 9
    DetectorOptions opt;
    opt.orderMatrix = true;
    for (bool inactive : {true, false}) {
      opt.inactiveOpt = inactive;
      const OrderMatrix m = *run_gwcp(t, opt).order;
      CHECK(m.at(3, 6) == OrderMatrix::Ordered);
      CHECK(m.at(3, 5) == OrderMatrix::Unordered);
      CHECK(m.at(4, 7) == OrderMatrix::Unordered);
      CHECK(m.at(4, 8) == OrderMatrix::Ordered);
      CHECK(m.at(4, 9) == OrderMatrix::Ordered);
    }
  }

  TEST_CASE("barrier orders both clocks") {
    Trace t = parse("config blocks=1 warps=2 lanes=1", "0.0.0 wr g:1\nbar block 0\n0.1.0 wr g:1\n");
    for (bool compress : {true, false}) {
      DetectorOptions opt;
      opt.compress = compress;
      opt.orderMatrix = true;
      DetectionResult r = run_gwcp(t, opt);
      CHECK(r.reports.empty());
      CHECK(r.order->at(0, 2) == OrderMatrix::Ordered);
      CHECK(r.order->at(0, 1) == OrderMatrix::NotTracked);
    }
  }

  TEST_CASE("a barrier does not turn a thread's own history into predictive knowledge") {
    // After the warp barrier, lane 1 writes x and then runs an empty critical
    // section; block 1 runs one too and writes x. The sections do not
    // conflict, so the writes stay unordered.
    Trace t = parse("config blocks=2 warps=1 lanes=2",
                    "bar warp 0 0 0x3\n"
                    "0.0.1 wr g:5\n"
                    "0.0.1 acq 1 device\n"
                    "0.0.1 rel 1 device\n"
                    "1.0.0 acq 1 device\n"
                    "1.0.0 rel 1 device\n"
                    "1.0.0 wr g:5\n");
    for (bool compress : {true, false}) {
      DetectorOptions opt;
      opt.compress = compress;
      CHECK(run_gwcp(t, opt).reports.size() == 1);
      CHECK(run_hb(t, opt).reports.empty());
    }
  }

  TEST_CASE("same-thread accesses never race") {
    Trace t = parse(k2Blocks, "0.0.0 wr g:1\n0.0.0 rd g:1\n0.0.0 wr g:1\n");
    for (auto k : kAll) CHECK_FALSE(racy(k, t));
  }

  TEST_CASE("atomics") {
    for (auto k : kAll) {
      CHECK_FALSE(racy(k, gen_litmus("device-atomics")));
      CHECK(racy(k, gen_litmus("block-atomics")));
      CHECK(racy(k, parse(k2Blocks, "0.0.0 wr g:1 atomic device\n1.0.0 wr g:1\n")));
      CHECK_FALSE(racy(k, parse("config blocks=1 warps=2 lanes=1", "0.0.0 wr g:1 atomic block\n0.1.0 rd g:1 atomic block\n")));
    }
  }

  TEST_CASE("read-read never races; rw is reported with the reader as prior") {
    CHECK_FALSE(racy(DetectorKind::Gwcp, parse(k2Blocks, "0.0.0 rd g:1\n1.0.0 rd g:1\n")));
    auto r = races(DetectorKind::Gwcp, parse(k2Blocks, "0.0.0 rd g:1\n1.0.0 wr g:1\n"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].kind == RaceKind::RW);
    CHECK(r[0].prior.event == 0);
  }

  TEST_CASE("dedup by location and instruction pair; later reports are post-race") {
    Trace t = parse(k3Blocks,
                    "0.0.0 wr g:1 instr 1\n1.0.0 wr g:1 instr 2\n"
                    "0.0.0 wr g:1 instr 1\n1.0.0 wr g:1 instr 2\n"
                    "2.0.0 wr g:1 instr 3\n");
    auto r = races(DetectorKind::Gwcp, t);
    REQUIRE(r.size() == 3);
    CHECK(r[0].confidence == "first-race");
    CHECK(r[1].confidence == "post-race");
    CHECK(r[1].prior.instr == 2);
    CHECK(r[1].current.instr == 1);
    CHECK(r[2].current.instr == 3);
  }

  TEST_CASE("classification") {
    auto r = races(DetectorKind::Gwcp, parse("config blocks=2 warps=2 lanes=2",
                                             "0.0.0 wr g:1 instr 1\n0.0.1 wr g:1 instr 2\n"
                                             "0.1.0 wr g:1 instr 3\n1.0.0 wr g:1 instr 4\n"));
    REQUIRE(r.size() == 3);
    CHECK(r[0].cls == RaceClass::Intrawarp);
    CHECK(r[1].cls == RaceClass::Interwarp);
    CHECK(r[2].cls == RaceClass::Interblock);
  }

  TEST_CASE("thread exit") {
    // Exit drops the exited thread's queues; other threads keep working.
    Trace t = parse(k3Blocks,
                    "0.0.0 end\n1.0.0 acq 1 device\n1.0.0 wr g:1\n1.0.0 rel 1 device\n"
                    "2.0.0 acq 1 device\n2.0.0 wr g:1\n2.0.0 rel 1 device\n2.0.0 end\n1.0.0 end\n");
    for (bool opt : {true, false}) {
      DetectorOptions o;
      o.inactiveOpt = opt;
      DetectionResult r = run_gwcp(t, o);
      CHECK(r.reports.empty());
      CHECK(r.diagnostics.empty());
    }
    DetectionResult held = run_gwcp(parse(k2Blocks, "0.0.0 acq 1 device\n0.0.0 end\n"));
    REQUIRE(held.diagnostics.size() == 1);
    CHECK(held.diagnostics[0].message == "exit while holding a lock");
  }

  TEST_CASE("runtime lock misuse becomes a diagnostic") {
    DetectionResult r = run_gwcp(parse(k2Blocks, "0.0.0 rel 1 device\n0.0.0 acq 1 device\n0.0.0 acq 1 device\n"));
    CHECK(r.diagnostics.size() == 2);
    DetectionResult h = run_hb(parse(k2Blocks, "0.0.0 rel 1 device\n"));
    CHECK(h.diagnostics.size() == 1);
  }

  TEST_CASE("empty trace") {
    Trace t = parse(k2Blocks, "");
    for (auto k : kAll) CHECK(run_detector(k, t).reports.empty());
  }

  TEST_CASE("stats: whole-block barrier leaves every thread clock compressed") {
    ClockStats s = collect_stats(gen_litmus("warp-lock"));
    REQUIRE(s.perEvent.size() == gen_litmus("warp-lock").events.size());
    CHECK(s.perEvent.back().warpExpanded == 0);
    CHECK(s.perEvent.back().blockExpanded == 0);
    CHECK(s.peakEntries > 0);
    ClockStats dense = collect_stats(gen_litmus("warp-lock"), DetectorKind::Gwcp, DetectorOptions{false});
    CHECK(dense.perEvent.back().entries == 2 * 8 * 8);
    CHECK_THROWS_AS(collect_stats(gen_litmus("warp-lock"), DetectorKind::Lockset), std::invalid_argument);
  }

  TEST_CASE("stats json") {
    ClockStats s;
    s.perEvent.push_back(CompressionCounts{1, 2, 3, 4, 5});
    s.peakEntries = 9;
    CHECK(stats_to_json(s) ==
          R"({"events":1,"final":{"blocks_compressed":1,"blocks_expanded":2,"warps_compressed":3,"warps_expanded":4,"entries":5},"peak_entries":9})");
    CHECK(stats_to_json(s, true).find("per_event") != std::string::npos);
  }

  TEST_CASE("detector names") {
    for (auto k : kAll) CHECK(detector_from_string(to_string(k)) == k);
    CHECK_FALSE(detector_from_string("tsan"));
  }

  TEST_CASE("report json") {
    auto r = races(DetectorKind::Gwcp, parse(k2Blocks, "0.0.0 wr s:0x1f instr 3\n0.0.0 wr g:0x2a instr 4\n1.0.0 rd g:2a instr 9\n"));
    REQUIRE(r.size() == 1);
    CHECK(to_json_line(r[0]) ==
          R"({"detector":"gwcp","kind":"wr","location":{"space":"global","addr":"0x2a"},"prior":{"event":1,"tid":"0.0.0","instr":4},"current":{"event":2,"tid":"1.0.0","instr":9},"class":"interblock","confidence":"first-race"})");
    RaceReport shared = r[0];
    shared.loc = Location::shared(1, 0x10);
    CHECK(to_json_line(shared).find(R"("location":{"space":"shared","block":1,"addr":"0x10"})") != std::string::npos);
  }
}

TEST_SUITE("hb") {
  TEST_CASE("no-cp pattern is not reported") { CHECK_FALSE(racy(DetectorKind::Hb, gen_litmus("no-cp"))); }

  TEST_CASE("fence alone does not order") {
    Trace t = parse(k2Blocks, "0.0.0 wr g:1\n0.0.0 fence device\n1.0.0 wr g:1\n");
    CHECK(racy(DetectorKind::Hb, t));
  }

  TEST_CASE("divergent lanes without syncwarp race") {
    Trace t = parse(kOneWarp, "0.0.0 wr g:1 instr 1\n0.0.1 wr g:1 instr 2\n");
    auto r = races(DetectorKind::Hb, t);
    REQUIRE(r.size() == 1);
    CHECK(r[0].cls == RaceClass::Intrawarp);
  }

  TEST_CASE("same-instruction write-write within one warp record") {
    Trace t = parse(kOneWarp, "wacc 0 0 0xf wr g:1,g:2,g:1,g:3 instr 5\n");
    for (auto k : kAll) {
      auto r = races(k, t);
      REQUIRE(r.size() == 1);
      CHECK(r[0].prior.tid.lane == 0);
      CHECK(r[0].current.tid.lane == 2);
      CHECK(r[0].kind == RaceKind::WW);
    }
    // Distinct addresses or atomics: no race.
    CHECK_FALSE(racy(DetectorKind::Hb, parse(kOneWarp, "wacc 0 0 0xf wr g:1,g:2,g:3,g:4\n")));
    CHECK_FALSE(racy(DetectorKind::Hb, parse(kOneWarp, "wacc 0 0 0x3 wr g:1,g:1 atomic block\n")));
    CHECK_FALSE(racy(DetectorKind::Hb, parse(kOneWarp, "wacc 0 0 0x3 rd g:1,g:1\n")));
  }

  TEST_CASE("warp barrier orders only its participants") {
    CHECK_FALSE(racy(DetectorKind::Hb, gen_litmus("warp-barrier-separated")));
    CHECK(racy(DetectorKind::Hb, gen_litmus("warp-barrier-partial")));
  }

  TEST_CASE("single-thread barrier only ticks local time") {
    Trace t = parse("config blocks=1 warps=1 lanes=2",
                    "0.0.0 wr g:1\nbar warp 0 0 0x1\n0.0.1 wr g:1\n");
    CHECK(racy(DetectorKind::Hb, t));
    CHECK(racy(DetectorKind::Gwcp, t));
  }

  TEST_CASE("block barrier skips ended threads") {
    Trace t = parse("config blocks=1 warps=2 lanes=1", "0.1.0 end\n0.0.0 wr g:1\nbar block 0\n0.0.0 rd g:1\n");
    CHECK_FALSE(racy(DetectorKind::Hb, t));
  }

  TEST_CASE("scoped release-acquire edges") {
    // Same block, block scope: ordered.
    CHECK_FALSE(racy(DetectorKind::Hb, parse("config blocks=1 warps=2 lanes=1",
                                             "0.0.0 wr g:1\n0.0.0 acq 1 block\n0.0.0 rel 1 block\n"
                                             "0.1.0 acq 1 block\n0.1.0 rel 1 block\n0.1.0 wr g:1\n")));
    // Device release, block acquire in another block: ordered.
    CHECK_FALSE(racy(DetectorKind::Hb, parse(k2Blocks,
                                             "0.0.0 wr g:1\n0.0.0 acq 1 device\n0.0.0 rel 1 device\n"
                                             "1.0.0 acq 1 block\n1.0.0 rel 1 block\n1.0.0 wr g:1\n")));
    // Block release, device acquire in another block: ordered.
    CHECK_FALSE(racy(DetectorKind::Hb, parse(k2Blocks,
                                             "0.0.0 wr g:1\n0.0.0 acq 1 block\n0.0.0 rel 1 block\n"
                                             "1.0.0 acq 1 device\n1.0.0 rel 1 device\n1.0.0 wr g:1\n")));
  }

  TEST_CASE("compressed and dense clocks agree") {
    for (const CorpusEntry& c : corpus()) {
      Trace t = analysis_trace(parse_trace(c.text)).trace;
      DetectorOptions dense;
      dense.compress = false;
      CHECK(run_hb(t).reports == run_hb(t, dense).reports);
    }
  }
}

TEST_SUITE("lockset") {
  TEST_CASE("unprotected flag handoff with a fence is missed") {
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("scord-unprotected")));
  }

  TEST_CASE("one side locked, the other not") {
    Trace t = parse(k2Blocks, "0.0.0 wr g:1\n1.0.0 acq 1 device\n1.0.0 wr g:1\n1.0.0 rel 1 device\n");
    auto r = races(DetectorKind::Lockset, t);
    REQUIRE(r.size() == 1);
    CHECK(r[0].confidence == "approximate");
  }

  TEST_CASE("fence between strong accesses hides the race") {
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("fence-only")));
    // A block fence does not reach another block.
    CHECK(racy(DetectorKind::Lockset, parse(k2Blocks, "0.0.0 wr g:1\n0.0.0 fence block\n1.0.0 wr g:1\n")));
    // The fence must come after the first access.
    CHECK(racy(DetectorKind::Lockset, parse(k2Blocks, "0.0.0 fence device\n0.0.0 wr g:1\n1.0.0 wr g:1\n")));
    // The fence must be issued by the earlier accessor.
    CHECK(racy(DetectorKind::Lockset, parse(k2Blocks, "0.0.0 wr g:1\n1.0.0 fence device\n1.0.0 wr g:1\n")));
  }

  TEST_CASE("common lock instance protects; disjoint block instances do not") {
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("lock-protected")));
    CHECK(racy(DetectorKind::Lockset, gen_litmus("block-lock-cross-block")));
  }

  TEST_CASE("lockset is maintained exactly") {
    // acq A, acq B, rel A: the set is {B}, so a B-protected access elsewhere is safe.
    Trace t = parse(k2Blocks,
                    "0.0.0 acq 1 device\n0.0.0 acq 2 device\n0.0.0 rel 1 device\n0.0.0 wr g:1\n0.0.0 rel 2 device\n"
                    "1.0.0 acq 2 device\n1.0.0 wr g:1\n1.0.0 rel 2 device\n");
    DetectionResult r = run_lockset(t);
    CHECK(r.reports.empty());
    Trace u = parse(k2Blocks,
                    "0.0.0 acq 1 device\n0.0.0 acq 2 device\n0.0.0 rel 1 device\n0.0.0 wr g:1\n0.0.0 rel 2 device\n"
                    "1.0.0 acq 1 device\n1.0.0 wr g:1\n1.0.0 rel 1 device\n");
    CHECK_FALSE(run_lockset(u).reports.empty());
  }

  TEST_CASE("barrier-separated accesses in a block are never reported") {
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("barrier-separated")));
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("warp-barrier-separated")));
    CHECK(racy(DetectorKind::Lockset, gen_litmus("warp-barrier-partial")));
  }

  TEST_CASE("warp granularity misses intrawarp races") {
    DetectorOptions opt;
    opt.warpGranularity = true;
    CHECK(racy(DetectorKind::Lockset, gen_litmus("its-intrawarp")));
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("its-intrawarp"), opt));
    CHECK_FALSE(racy(DetectorKind::Lockset, gen_litmus("same-instr-intrawarp"), opt));
    CHECK(racy(DetectorKind::Lockset, gen_litmus("block-atomics"), opt));
  }

  TEST_CASE("lockset keeps no order matrix or stats") {
    DetectorOptions opt;
    opt.orderMatrix = true;
    opt.collectStats = true;
    DetectionResult r = run_lockset(gen_litmus("no-cp"), opt);
    CHECK_FALSE(r.order);
    CHECK_FALSE(r.stats);
  }
}
