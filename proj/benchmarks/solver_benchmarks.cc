// Copyright 2026 The DFL-SFGE Authors
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

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dfl/datagen.h"
#include "dfl/predictor.h"
#include "dfl/problems.h"
#include "dfl/solvers.h"

namespace dfl {
namespace {

void BM_KnapsackDp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> value(1, 100), weight(1, 15);
  std::vector<double> v(n);
  std::vector<std::int64_t> w(n);
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    v[i] = value(rng);
    w[i] = weight(rng);
    total += w[i];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveKnapsackDp(v, w, total / 2));
  }
}
BENCHMARK(BM_KnapsackDp)->Arg(20)->Arg(50)->Arg(200);

LinearModel RandomCover(int items, int sets, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.3);
  std::uniform_int_distribution<int> cost(1, 100), demand(1, 8);
  LinearModel m;
  for (int j = 0; j < sets; ++j) {
    m.AddVariable(0, 10, cost(rng), true);
  }
  for (int i = 0; i < items; ++i) {
    std::vector<double> row(sets);
    for (double& a : row) a = coin(rng) ? 1.0 : 0.0;
    row[i % sets] = 1.0;
    m.AddDenseRow(row, Sense::kGe, demand(rng));
  }
  return m;
}

void BM_SimplexLpRelaxation(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const LinearModel m = RandomCover(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(1)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(SolveLpSimplex(m));
}
BENCHMARK(BM_SimplexLpRelaxation)->Args({5, 15})->Args({10, 50});

void BM_BranchAndBoundCover(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const LinearModel m = RandomCover(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(1)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(SolveMilpBnB(m));
}
BENCHMARK(BM_BranchAndBoundCover)->Args({5, 15})->Args({10, 50});

void BM_WsmcSaa(benchmark::State& state) {
  GenConfig gen;
  gen.n_items = 5;
  gen.n_sets = 15;
  gen.n_instances = 10;
  gen.probe_samples = 500;
  const Dataset ds = BuildDataset(gen, ProblemKind::kWsmc, 4);
  const ProblemSpec spec = MakeProblem(ds, 10.0);
  Rng rng(5);
  GaussianPredictor model = GaussianPredictor::Init(5, gen.p, rng);
  model.b.setConstant(5.0);
  ScenarioSet scenarios;
  const Eigen::VectorXd x = ToEigen(ds.instances[0].x);
  for (int k = 0; k < state.range(0); ++k) {
    scenarios.scenarios.push_back(ToStd(SamplePrediction(model, x, rng)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(SaaExtensiveSolve(spec, scenarios, BnBConfig{}));
  }
}
BENCHMARK(BM_WsmcSaa)->Arg(1)->Arg(5)->Arg(10)->Arg(25)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dfl

BENCHMARK_MAIN();
