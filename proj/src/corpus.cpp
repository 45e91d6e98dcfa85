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
#include <array>

#include "gpurace/workloads.hpp"

namespace gpurace {

namespace {

// Verdict order: gwcp, hb, lockset, oracle.
constexpr std::array kCorpus{
    CorpusEntry{"wcp-classic",
                "unprotected accesses around non-conflicting critical sections",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:10 instr 1
0.0.0 acq 1 device
0.0.0 rd g:20 instr 2
0.0.0 rel 1 device
1.0.0 acq 1 device
1.0.0 rd g:20 instr 3
1.0.0 rel 1 device
1.0.0 wr g:10 instr 4
)",
                {true, false, false, true}},
    CorpusEntry{"no-cp",
                "lock-ordered under HB, but the first read conflicts before any critical-section conflict",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:10 instr 1
0.0.0 acq 1 device
0.0.0 wr g:20 instr 2
0.0.0 rel 1 device
1.0.0 acq 1 device
1.0.0 rd g:10 instr 3
1.0.0 rd g:20 instr 4
1.0.0 rel 1 device
)",
                {true, false, true, true}},
    CorpusEntry{"scoped-cs",
                "critical sections of one lock in different block scopes do not exclude each other",
                R"(config blocks=2 warps=2 lanes=1
0.0.0 wr g:10 instr 1
0.0.0 acq 1 block
0.0.0 wr g:20 instr 2
0.0.0 rel 1 block
0.1.0 acq 1 block
0.1.0 rel 1 block
0.1.0 acq 2 device
0.1.0 rel 2 device
1.0.0 acq 2 device
1.0.0 rel 2 device
1.0.0 acq 1 block
1.0.0 rd g:20 instr 3
1.0.0 rel 1 block
1.0.0 rd g:10 instr 4
)",
                {true, false, true, true}},
    CorpusEntry{"lockset-disjoint-locks",
                "different locks around x, ordered because the read of y must see the write inside lock 3",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 acq 1 device
0.0.0 wr g:10 instr 1
0.0.0 rel 1 device
0.0.0 acq 3 device
0.0.0 wr g:20 instr 2
0.0.0 rel 3 device
1.0.0 acq 3 device
1.0.0 rd g:20 instr 3
1.0.0 rel 3 device
1.0.0 acq 2 device
1.0.0 wr g:10 instr 4
1.0.0 rel 2 device
)",
                {false, false, true, false}},
    CorpusEntry{"scord-unprotected",
                "message passing through a flag with no lock on either side",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:10 instr 1
0.0.0 fence device
0.0.0 wr g:30 atomic device instr 2
1.0.0 rd g:30 atomic device instr 3
1.0.0 rd g:10 instr 4
)",
                {true, true, false, true}},
    CorpusEntry{"fence-only",
                "a device fence alone does not order two plain writes",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:10 instr 1
0.0.0 fence device
1.0.0 wr g:10 instr 2
)",
                {true, true, false, true}},
    CorpusEntry{"its-intrawarp",
                "two lanes of one warp at different instructions",
                R"(config blocks=1 warps=1 lanes=2
0.0.0 wr g:10 instr 1
0.0.1 rd g:10 instr 2
)",
                {true, true, true, true}},
    CorpusEntry{"same-instr-intrawarp",
                "one coalesced warp store with two lanes on the same address",
                R"(config blocks=1 warps=1 lanes=2
wacc 0 0 0x3 wr g:10,g:10 instr 1
)",
                {true, true, true, true}},
    CorpusEntry{"barrier-separated",
                "write and read separated by a block barrier",
                R"(config blocks=1 warps=2 lanes=1
0.0.0 wr g:10 instr 1
bar block 0
0.1.0 rd g:10 instr 2
)",
                {false, false, false, false}},
    CorpusEntry{"warp-barrier-separated",
                "write and read separated by a warp barrier over both lanes",
                R"(config blocks=1 warps=1 lanes=2
0.0.0 wr g:10 instr 1
bar warp 0 0 0x3
0.0.1 rd g:10 instr 2
)",
                {false, false, false, false}},
    CorpusEntry{"warp-barrier-partial",
                "the reading lane is outside the warp barrier mask",
                R"(config blocks=1 warps=1 lanes=3
0.0.0 wr g:10 instr 1
bar warp 0 0 0x3
0.0.2 rd g:10 instr 2
)",
                {true, true, true, true}},
    CorpusEntry{"device-atomics",
                "device-scoped atomic updates from two blocks",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:10 atomic device instr 1
1.0.0 wr g:10 atomic device instr 2
)",
                {false, false, false, false}},
    CorpusEntry{"block-atomics",
                "block-scoped atomic updates from two blocks",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:10 atomic block instr 1
1.0.0 wr g:10 atomic block instr 2
)",
                {true, true, true, true}},
    CorpusEntry{"hb-composition-miss",
                "an HB chain through a second lock hides a predictable race",
                R"(config blocks=3 warps=1 lanes=1
0.0.0 wr g:40 instr 1
0.0.0 acq 1 device
0.0.0 wr g:20 instr 2
0.0.0 rel 1 device
1.0.0 acq 1 device
1.0.0 rd g:20 instr 3
1.0.0 rel 1 device
1.0.0 acq 2 device
1.0.0 rel 2 device
2.0.0 acq 2 device
2.0.0 rel 2 device
2.0.0 wr g:40 instr 4
)",
                {false, false, false, true}},
    CorpusEntry{"early-conflict-cs",
                "critical sections conflict before the racy access of the first one",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 acq 1 device
0.0.0 wr g:20 instr 1
0.0.0 wr g:10 instr 2
0.0.0 rel 1 device
1.0.0 acq 1 device
1.0.0 wr g:20 instr 3
1.0.0 rel 1 device
1.0.0 wr g:10 instr 4
)",
                {false, false, true, true}},
    CorpusEntry{"lock-protected",
                "both writes inside critical sections of one device lock",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 acq 1 device
0.0.0 wr g:10 instr 1
0.0.0 rel 1 device
1.0.0 acq 1 device
1.0.0 wr g:10 instr 2
1.0.0 rel 1 device
)",
                {false, false, false, false}},
    CorpusEntry{"block-lock-cross-block",
                "a block-scoped lock used from two blocks",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 acq 1 block
0.0.0 wr g:10 instr 1
0.0.0 rel 1 block
1.0.0 acq 1 block
1.0.0 wr g:10 instr 2
1.0.0 rel 1 block
)",
                {true, true, true, true}},
    CorpusEntry{"inferred-lock",
                "spin lock written as atomics and fences, recovered by lock inference",
                R"(config blocks=2 warps=1 lanes=1
0.0.0 wr g:100 atomic device instr 1
0.0.0 fence device
0.0.0 wr g:10 instr 2
0.0.0 fence device
0.0.0 wr g:100 atomic device instr 3
1.0.0 wr g:100 atomic device instr 1
1.0.0 fence device
1.0.0 wr g:10 instr 2
1.0.0 fence device
1.0.0 wr g:100 atomic device instr 3
)",
                {false, false, false, false}},
    CorpusEntry{"warp-lock",
                "lane 0 takes a block lock on behalf of its whole warp",
                R"(config blocks=1 warps=2 lanes=4
bar warp 0 0 0xf
0.0.0 wr g:100 atomic block instr 1
0.0.0 fence block
0.0.0 rd g:200 instr 2
0.0.0 wr g:200 instr 3
bar warp 0 0 0xf
wacc 0 0 0xf wr g:a0,g:a4,g:a8,g:ac instr 4
bar warp 0 0 0xf
0.0.0 fence block
0.0.0 wr g:100 atomic block instr 5
bar warp 0 0 0xf
bar warp 0 1 0xf
0.1.0 wr g:100 atomic block instr 1
0.1.0 fence block
0.1.0 rd g:200 instr 2
0.1.0 wr g:200 instr 3
bar warp 0 1 0xf
wacc 0 1 0xf wr g:b0,g:b4,g:b8,g:bc instr 4
bar warp 0 1 0xf
0.1.0 fence block
0.1.0 wr g:100 atomic block instr 5
bar warp 0 1 0xf
bar block 0
)",
                {false, false, false, false}},
};

}  // namespace

std::span<const CorpusEntry> corpus() { return kCorpus; }

const CorpusEntry& corpus_entry(std::string_view name) {
  auto it = std::find_if(kCorpus.begin(), kCorpus.end(), [&](const CorpusEntry& c) { return c.name == name; });
  if (it == kCorpus.end()) throw UnknownWorkload(name);
  return *it;
}

Trace gen_litmus(std::string_view name) { return parse_trace(corpus_entry(name).text); }

}  // namespace gpurace
