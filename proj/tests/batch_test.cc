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

#include <random>

#include "doctest.h"
#include "oracles.h"
#include "rlr/batch.h"
#include "rlr/errors.h"

namespace rlr {
namespace {

Dataset RandomData(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  Dataset d;
  d.feature_dim = m;
  for (std::size_t i = 0; i < n; ++i) {
    d.records.push_back(
        {std::to_string(i), oracle::RandomSequence(3 + i % 9, m, rng), int(i % 3 == 0)});
  }
  return d;
}

TEST_CASE("parallel predictions equal the serial reference") {
  std::mt19937_64 rng(18);
  const std::vector<PatternSpec> specs = {{2, 4}, {2, 3}};
  const RlrModel model = InitModel(4, specs, {2, 6}, Matching::kSubsequence, 8);
  const Dataset d = RandomData(157, 4, rng);
  const PreparedInputs inputs(model, d);
  const std::vector<double> serial = PredictBatchSerial(model, inputs);
  for (int threads : {1, 2, 4, 0}) CHECK(PredictBatch(model, inputs, threads) == serial);
}

TEST_CASE("parallel gradients match the serial reference") {
  std::mt19937_64 rng(19);
  const std::vector<PatternSpec> specs = {{2, 3}};
  const RlrModel model = InitModel(3, specs, {1, 4}, Matching::kSubsequence, 9);
  const Dataset d = RandomData(64, 3, rng);
  const PreparedInputs inputs(model, d);
  std::vector<std::size_t> idx(d.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  ModelGrads ref(model);
  const double ref_loss = BatchGradientSerial(model, inputs, idx, 1.0 / 64, ref);
  ModelGrads one(model);
  CHECK(BatchGradient(model, inputs, idx, 1.0 / 64, one, 1) == ref_loss);
  for (std::size_t p = 0; p < ref.patterns.size(); ++p) {
    CHECK(one.patterns[p].main_weights == ref.patterns[p].main_weights);
  }
  ModelGrads four(model);
  CHECK(BatchGradient(model, inputs, idx, 1.0 / 64, four, 4) ==
        doctest::Approx(ref_loss).epsilon(1e-12));
  for (std::size_t p = 0; p < ref.patterns.size(); ++p) {
    for (std::size_t i = 0; i < ref.patterns[p].main_weights.size(); ++i) {
      CHECK(four.patterns[p].main_weights[i] ==
            doctest::Approx(ref.patterns[p].main_weights[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("width mismatch is a data error") {
  std::mt19937_64 rng(20);
  const std::vector<PatternSpec> specs = {{1, 2}};
  const RlrModel model = InitModel(3, specs, {}, Matching::kWhole, 1);
  CHECK_THROWS_AS(PreparedInputs(model, RandomData(4, 2, rng)), DataError);
}

}  // namespace
}  // namespace rlr
