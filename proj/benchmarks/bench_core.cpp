// Copyright 2026 The semsub Authors.
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

#include <string>
#include <vector>

#include "semsub/classifier.hpp"
#include "semsub/embeddings.hpp"
#include "semsub/selection.hpp"
#include "semsub/subspace.hpp"
#include "semsub/synthetic.hpp"

namespace {

using namespace semsub;

SyntheticBenchmark make_bench(std::size_t dim, std::size_t pairs) {
  SyntheticParams p;
  p.dim = dim;
  p.n_pairs = pairs;
  p.n_task = 400;
  return generate_synthetic_benchmark(p);
}

void BM_LearnSubspace(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto bench = make_bench(dim, 100);
  const auto c = std::min<std::size_t>(dim, 32);
  for (auto _ : state) benchmark::DoNotOptimize(learn_subspace(bench.pairs, c));
}
BENCHMARK(BM_LearnSubspace)->Arg(64)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_FitLda(benchmark::State& state) {
  const auto bench = make_bench(64, 100);
  const Matrix rows = stack_points(bench.pairs).leftCols(state.range(0));
  std::vector<Label> labels;
  for (std::size_t i = 0; i < bench.pairs.size(); ++i) {
    labels.push_back(Label::kPositive);
    labels.push_back(Label::kNegative);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_lda(rows, labels));
}
BENCHMARK(BM_FitLda)->Arg(8)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_NearestNeighbors(benchmark::State& state) {
  const auto vocab = static_cast<std::size_t>(state.range(0));
  SyntheticParams p;
  p.dim = 300;
  p.n_pairs = vocab / 2;
  p.n_task = 10;
  const auto bench = generate_synthetic_benchmark(p);
  std::vector<std::pair<std::string, Vector>> entries;
  for (const auto& pair : bench.pairs.pairs) {
    entries.emplace_back(*pair.surface_a, pair.a);
    entries.emplace_back(*pair.surface_b, pair.b);
  }
  const EmbeddingTable table(p.dim, std::move(entries));
  const Vector query = bench.task.instances[0].vector;
  for (auto _ : state) benchmark::DoNotOptimize(nearest_neighbors(table, query, 4));
}
BENCHMARK(BM_NearestNeighbors)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SelectComponents(benchmark::State& state) {
  const auto bench = make_bench(64, static_cast<std::size_t>(state.range(0)));
  const auto grid = default_component_grid(bench.pairs.size(), 5, bench.pairs.dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_components(bench.pairs, grid, {.seed = 1}));
  }
}
BENCHMARK(BM_SelectComponents)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
