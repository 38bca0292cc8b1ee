// Copyright 2026 The ech-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "echlab/bounds.hpp"
#include "echlab/capacities.hpp"
#include "echlab/folding.hpp"
#include "echlab/packing.hpp"
#include "echlab/weights.hpp"

namespace {

using namespace echlab;

void BM_CapBall(benchmark::State& state) {
  std::int64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cap_ball(1.0, k++ % 1000000));
}
BENCHMARK(BM_CapBall);

void BM_CapEllipsoid(benchmark::State& state) {
  const auto k = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(cap_ellipsoid(1.0, 2.5, k));
}
BENCHMARK(BM_CapEllipsoid)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_WeightEngine(benchmark::State& state) {
  for (auto _ : state) {
    WeightEngine engine(Profile::power_law(1.5));
    engine.expand(state.range(0));
    benchmark::DoNotOptimize(engine.snapshot(state.range(0)));
  }
}
BENCHMARK(BM_WeightEngine)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_UnionExact(benchmark::State& state) {
  WeightEngine engine(Profile::power_law(1.5));
  engine.expand(200);
  WeightSequence ws;
  ws.head = engine.snapshot(200).head;
  for (auto _ : state) benchmark::DoNotOptimize(cap_union_exact(ws, state.range(0)));
}
BENCHMARK(BM_UnionExact)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_PowerLawBracket(benchmark::State& state) {
  CapacityOptions opt;
  opt.tolerance = 0.01;
  opt.threads = 1;
  CapacitySolver solver(DomainSpec::concave_toric(Profile::power_law(1.5)), opt);
  for (auto _ : state) benchmark::DoNotOptimize(solver.bracket(state.range(0)));
}
BENCHMARK(BM_PowerLawBracket)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_DyadicPacking(benchmark::State& state) {
  const auto f = Profile::power_law(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(dyadic_packing(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DyadicPacking)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Obstruction(benchmark::State& state) {
  CapacityOptions opt;
  opt.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generalized_obstruction(DomainSpec::copies(4, DomainSpec::polydisc(1, 1)),
                                DomainSpec::concave_toric(Profile::power_law(1.5)), 10000, opt));
  }
}
BENCHMARK(BM_Obstruction)->Unit(benchmark::kMillisecond);

void BM_FoldingEmbed(benchmark::State& state) {
  FoldingModel model(FoldingParams{});
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(model.embed(model.sample(rng)));
}
BENCHMARK(BM_FoldingEmbed);

void BM_FoldingAudit(benchmark::State& state) {
  FoldingModel model(FoldingParams{});
  const FoldingCheckConfig cfg{1000, 10000, 10000, 7};
  for (auto _ : state) benchmark::DoNotOptimize(check_folding(model, cfg));
}
BENCHMARK(BM_FoldingAudit)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
