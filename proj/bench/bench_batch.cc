/*
 * Copyright 2026 The RLR Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference kernels against their OpenMP counterparts on a
// planted-motif batch. The thread count is the benchmark argument.

#include <cstddef>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "rlr/batch.h"
#include "rlr/model.h"
#include "rlr/synthetic.h"

namespace {

struct Fixture {
  rlr::RlrModel model;
  rlr::Dataset data;
  std::vector<std::size_t> indices;
};

const Fixture& Shared() {
  static const Fixture f = [] {
    rlr::SyntheticSpec spec;
    spec.num_records = 512;
    spec.seed = 1;
    Fixture out;
    out.data = rlr::GeneratePlantedMotif(spec).dataset;
    const std::vector<rlr::PatternSpec> bank = {{4, 4}, {4, 6}};
    out.model = rlr::InitModel(spec.feature_dim, bank, {}, rlr::Matching::kSubsequence, 3);
    out.indices.resize(out.data.records.size());
    std::iota(out.indices.begin(), out.indices.end(), std::size_t{0});
    return out;
  }();
  return f;
}

void BM_PredictSerial(benchmark::State& state) {
  const Fixture& f = Shared();
  const rlr::PreparedInputs inputs(f.model, f.data);
  for (auto _ : state) benchmark::DoNotOptimize(rlr::PredictBatchSerial(f.model, inputs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(inputs.size()));
}

void BM_PredictParallel(benchmark::State& state) {
  const Fixture& f = Shared();
  const rlr::PreparedInputs inputs(f.model, f.data);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rlr::PredictBatch(f.model, inputs, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(inputs.size()));
}

void BM_GradientSerial(benchmark::State& state) {
  const Fixture& f = Shared();
  const rlr::PreparedInputs inputs(f.model, f.data);
  rlr::ModelGrads grads(f.model);
  for (auto _ : state) {
    grads.SetZero();
    benchmark::DoNotOptimize(rlr::BatchGradientSerial(f.model, inputs, f.indices, 1.0, grads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(inputs.size()));
}

void BM_GradientParallel(benchmark::State& state) {
  const Fixture& f = Shared();
  const rlr::PreparedInputs inputs(f.model, f.data);
  const int threads = static_cast<int>(state.range(0));
  rlr::ModelGrads grads(f.model);
  for (auto _ : state) {
    grads.SetZero();
    benchmark::DoNotOptimize(
        rlr::BatchGradient(f.model, inputs, f.indices, 1.0, grads, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(inputs.size()));
}

BENCHMARK(BM_PredictSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PredictParallel)->RangeMultiplier(2)->Range(1, 8)
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GradientSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GradientParallel)->RangeMultiplier(2)->Range(1, 8)
    ->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
