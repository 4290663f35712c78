// Copyright 2026 The adascal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "adascal/bandit.h"
#include "adascal/cones.h"
#include "adascal/experiment_config.h"
#include "adascal/harness.h"

namespace adascal {
namespace {

void BM_OmdEntropyStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  Vec loss(n);
  for (double& x : loss) x = u(rng);
  SimplexPoint dist = SimplexPoint::Uniform(n);
  for (auto _ : state) {
    dist = OmdEntropyStep(dist, loss, 1e-3);
    benchmark::DoNotOptimize(dist);
  }
}
BENCHMARK(BM_OmdEntropyStep)->Arg(2)->Arg(8)->Arg(64);

void BM_ConeContainsGenerators(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::vector<Vec> gens;
  for (int j = 0; j < 2 * dim; ++j) {
    Vec g(dim);
    for (double& x : g) x = u(rng);
    g[0] += 1.0;
    gens.push_back(g);
  }
  const PolyhedralCone cone(dim, gens);
  Vec v(dim);
  for (double& x : v) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ConeContains(cone, v));
}
BENCHMARK(BM_ConeContainsGenerators)->Arg(2)->Arg(4)->Arg(8);

void BM_BilevelRun(benchmark::State& state) {
  ExperimentConfig config = BuildConfig({{"runs", "1"}});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(SimulateRun(config, seed++));
  state.SetItemsProcessed(state.iterations() * config.rounds);
}
BENCHMARK(BM_BilevelRun)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace adascal

BENCHMARK_MAIN();
