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
#include "rlr/model.h"

namespace rlr {
namespace {

TEST_CASE("two-state model without epsilon is logistic regression") {
  const std::vector<double> w = {0.5, -1.25, 2.0};
  const RlrModel model = MakeLrEquivalent(w, 0.3);
  const Sequence seq = {FeatureVector::Dense({1.0, 2.0, -0.5})};
  const double z = 0.5 - 2.5 - 1.0 + 0.3;
  CHECK(Predict(model, seq) == doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-14));
}

TEST_CASE("uniform predictions cost ln 2") {
  CHECK(BinaryCrossEntropy(0.5, 1) == doctest::Approx(std::log(2.0)));
  CHECK(BinaryCrossEntropy(0.5, 0) == doctest::Approx(std::log(2.0)));
  CHECK(BinaryCrossEntropy(0.0, 1) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("group norm of a 3-4 pattern is 5") {
  PatternParams p(2, 1);
  p.main_weights = {3.0};
  p.main_bias = {4.0};
  p.epsilon_bias = {-std::numeric_limits<double>::infinity()};  // frozen, excluded
  CHECK(PatternNorm(p) == 5.0);
  RlrModel model = MakeLrEquivalent(std::vector<double>{3.0}, 4.0);
  CHECK(Penalty(model, 0.1, PenaltyKind::kGroup) == doctest::Approx(0.5));
  CHECK(Penalty(model, 0.1, PenaltyKind::kSquared) == doctest::Approx(2.5));
}

TEST_CASE("flatten summarizes each feature over time") {
  const Sequence seq = {FeatureVector::Dense({1.0}), FeatureVector::Dense({3.0})};
  CHECK(FlattenFeatures(seq) == std::vector<double>{1.0, 3.0, 2.0, 1.0});
  CHECK_THROWS(FlattenFeatures(Sequence{}));
}

TEST_CASE("init is seed-deterministic and well shaped") {
  const std::vector<PatternSpec> specs = {{2, 4}, {1, 3}};
  const RlrModel a = InitModel(5, specs, {2, 8}, Matching::kSubsequence, 42);
  const RlrModel b = InitModel(5, specs, {2, 8}, Matching::kSubsequence, 42);
  const RlrModel c = InitModel(5, specs, {2, 8}, Matching::kSubsequence, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  REQUIRE(a.patterns.size() == 3);
  CHECK(a.patterns[0].num_states == 4);
  CHECK(a.patterns[2].num_states == 3);
  REQUIRE(a.head.layers.size() == 2);
  CHECK(a.head.layers[0].inputs == 3);
  CHECK(a.head.layers[0].outputs == 8);
  CHECK(a.head.layers[1].outputs == 1);
  CHECK_NOTHROW(a.Validate());
}

TEST_CASE("zeroing a score through the head") {
  std::mt19937_64 rng(12);
  const std::vector<PatternSpec> specs = {{2, 3}};
  const RlrModel model = InitModel(3, specs, {1, 4}, Matching::kSubsequence, 1);
  const Sequence seq = oracle::RandomSequence(5, 3, rng);
  std::vector<double> scores = PatternLogScores(model, seq);
  CHECK(PredictFromLogScores(model, scores) == doctest::Approx(Predict(model, seq)));
  scores[0] = -std::numeric_limits<double>::infinity();
  const double zeroed = PredictFromLogScores(model, scores);
  CHECK(std::isfinite(zeroed));
}

TEST_CASE("model gradient matches finite differences of the loss") {
  std::mt19937_64 rng(13);
  const std::vector<PatternSpec> specs = {{1, 3}, {1, 2}};
  RlrModel model = InitModel(2, specs, {2, 3}, Matching::kSubsequence, 5);
  for (PatternParams& p : model.patterns) p = oracle::RandomParams(p.num_states, 2, rng, 0.8);
  std::vector<SequenceRecord> batch = {{"a", oracle::RandomSequence(3, 2, rng, false), 1},
                                       {"b", oracle::RandomSequence(4, 2, rng, false), 0}};
  ModelGrads grads(model);
  const double loss = LossAndGradient(model, batch, 0.05, PenaltyKind::kGroup, grads);
  CHECK(loss == doctest::Approx(Loss(model, batch, 0.05)));
  const double h = 1e-6;
  double worst = 0.0;
  ForEachParameter(model, grads, [&](std::span<double> t, std::span<const double> g) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double saved = t[i];
      t[i] = saved + h;
      const double up = Loss(model, batch, 0.05);
      t[i] = saved - h;
      const double down = Loss(model, batch, 0.05);
      t[i] = saved;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[i]) / std::max({std::abs(fd), std::abs(g[i]), 1e-6}));
    }
  });
  CHECK(worst < 1e-4);
}

}  // namespace
}  // namespace rlr
