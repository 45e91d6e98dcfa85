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

#include <benchmark/benchmark.h>

#include "gpurace/batch.hpp"
#include "gpurace/detect.hpp"

namespace {

using gpurace::Execution;

void BM_SoundnessSweep(benchmark::State& state) {
  const auto ex = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(gpurace::soundness_sweep(1, 200, {}, ex));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_SoundnessSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TransparencySweep(benchmark::State& state) {
  const auto ex = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(gpurace::transparency_sweep(1, 200, {}, ex));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_TransparencySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Detector throughput on a wide grid: compressed vs dense clocks.
void BM_GwcpWideGrid(benchmark::State& state) {
  gpurace::RandomConfig cfg;
  cfg.maxBlocks = 16;
  cfg.maxWarps = 4;
  cfg.maxLanes = 32;
  cfg.maxEvents = 4000;
  cfg.locations = 64;
  const gpurace::Trace t = gpurace::gen_random(7, cfg);
  gpurace::DetectorOptions opt;
  opt.compress = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(gpurace::run_gwcp(t, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.events.size()));
}
BENCHMARK(BM_GwcpWideGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
