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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "rlr/metrics.h"

namespace rlr {
namespace {

TEST_CASE("AUROC worked examples") {
  CHECK(*Auroc(std::vector<double>{0.9, 0.1, 0.8}, std::vector<int>{1, 0, 0}) == 1.0);
  CHECK(*Auroc(std::vector<double>{0.7, 0.7}, std::vector<int>{1, 0}) == 0.5);
  CHECK_FALSE(Auroc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}).has_value());
}

TEST_CASE("AUPRC worked examples") {
  CHECK(*Auprc(std::vector<double>{0.9, 0.1, 0.8}, std::vector<int>{1, 0, 0}) == 1.0);
  // Positive ranked second: precision 1/2 at its threshold.
  CHECK(*Auprc(std::vector<double>{0.9, 0.8}, std::vector<int>{0, 1}) == 0.5);
  CHECK_FALSE(Auprc(std::vector<double>{0.1}, std::vector<int>{0}).has_value());
}

TEST_CASE("metrics agree with brute-force oracles") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> level(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 40;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = level(rng) * 0.2;
      y[i] = level(rng) % 2;
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(std::abs(*Auroc(s, y) - oracle::PairwiseAuroc(s, y)) <= 1e-12);
    CHECK(std::abs(*Auprc(s, y) - oracle::SweepAuprc(s, y)) <= 1e-12);
  }
}

TEST_CASE("mean log-likelihood") {
  CHECK(MeanLogLikelihood(std::vector<double>{0.5, 0.5, 0.5}, std::vector<int>{1, 0, 1}) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(std::isfinite(MeanLogLikelihood(std::vector<double>{0.0}, std::vector<int>{1})));
}

TEST_CASE("report counts classes") {
  const EvalReport r = Evaluate(std::vector<double>{0.2, 0.6, 0.9}, std::vector<int>{0, 1, 1});
  CHECK(r.n_pos == 2);
  CHECK(r.n_neg == 1);
  CHECK(*r.auroc == 1.0);
}

}  // namespace
}  // namespace rlr
