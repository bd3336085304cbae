// Copyright 2026 The MVMF Authors. All Rights Reserved.
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

#include "mvmf/solver.hpp"
#include "mvmf/stability.hpp"
#include "mvmf/synthetic.hpp"

namespace {

mvmf::PlantedData planted(Eigen::Index n, Eigen::Index p) {
  mvmf::PlantSpec spec;
  spec.n = {n, n, n};
  spec.p = p;
  spec.d = 3;
  spec.r = 2;
  spec.noise = 0.3;
  spec.seed = 1;
  return mvmf::generate(spec);
}

void BM_Fit(benchmark::State& state) {
  const auto data = planted(state.range(0), state.range(1));
  mvmf::FitConfig cfg;
  cfg.d = 3;
  cfg.r = 2;
  for (auto _ : state) benchmark::DoNotOptimize(mvmf::fit(data.data, cfg));
}
BENCHMARK(BM_Fit)->Args({60, 20})->Args({200, 90})->Unit(benchmark::kMillisecond);

void BM_UpdateProjections(benchmark::State& state) {
  const auto data = planted(state.range(0), state.range(1));
  mvmf::FitConfig cfg;
  cfg.d = 3;
  cfg.r = 2;
  const auto f = mvmf::init(data.data, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(mvmf::update_projections(f, data.data));
}
BENCHMARK(BM_UpdateProjections)->Args({60, 20})->Args({200, 90});

void BM_Stability(benchmark::State& state) {
  const auto data = planted(40, 20);
  mvmf::StabilityConfig cfg;
  cfg.n_subsamples = static_cast<std::size_t>(state.range(0));
  cfg.fit.d = 1;
  cfg.fit.r = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mvmf::run_stability(data.data, cfg, 1));
}
BENCHMARK(BM_Stability)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
