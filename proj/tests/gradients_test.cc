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
#include "rlr/gradients.h"

namespace rlr {
namespace {

TEST_CASE("log-score gradients match central differences away from ties") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const PatternParams p = oracle::RandomParams(2 + trial % 4, 3, rng);
    const Sequence seq = oracle::RandomSequence(1 + trial % 7, 3, rng, false);
    const Matching mode = trial % 2 ? Matching::kSubsequence : Matching::kWhole;
    const FiniteDiffReport report = FiniteDiffCheck(p, seq, mode, 1e-6);
    if (report.near_tie || report.unmatched) continue;
    ++checked;
    CHECK(report.parameters_checked == p.parameter_count());
    CHECK(report.max_rel_error < 1e-5);
  }
  CHECK(checked == 40);
}

TEST_CASE("parameters off the argmax path get zero gradient") {
  std::mt19937_64 rng(9);
  PatternParams p = oracle::RandomParams(2, 2, rng);
  p.epsilon_bias[0] = -std::numeric_limits<double>::infinity();
  // d = 2, one symbol, whole mode: only the main transition can be used.
  const Sequence seq = {FeatureVector::Dense({0.3, -0.7})};
  auto [score, tape] = ScoreWithTape(p, seq, Matching::kWhole);
  const PatternGrads g = Backward(p, seq, tape, 1.0);
  for (double v : g.self_loop_weights) CHECK(v == 0.0);
  CHECK(g.main_bias[0] == doctest::Approx(Sigmoid(-MainLogit(p, 0, seq[0]))));
  CHECK(g.main_weights[1] == doctest::Approx(-0.7 * Sigmoid(-MainLogit(p, 0, seq[0]))));
}

TEST_CASE("upstream scales the gradient linearly") {
  std::mt19937_64 rng(10);
  const PatternParams p = oracle::RandomParams(3, 2, rng);
  const Sequence seq = oracle::RandomSequence(4, 2, rng);
  auto [score, tape] = ScoreWithTape(p, seq, Matching::kSubsequence);
  const PatternGrads one = Backward(p, seq, tape, 1.0);
  const PatternGrads three = Backward(p, seq, tape, 3.0);
  for (std::size_t i = 0; i < one.main_weights.size(); ++i) {
    CHECK(three.main_weights[i] == doctest::Approx(3.0 * one.main_weights[i]));
  }
}

TEST_CASE("tape score equals the plain log score") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const PatternParams p = oracle::RandomParams(2 + trial % 4, 2, rng);
    const Sequence seq = oracle::RandomSequence(trial % 9, 2, rng);
    for (Matching m : {Matching::kWhole, Matching::kSubsequence}) {
      CHECK(ScoreWithTape(p, seq, m).first == Score(p, seq, {m, Domain::kLog}));
    }
  }
}

TEST_CASE("unmatched sequences report no gradient") {
  const PatternParams p(6, 1);
  const Sequence seq = {FeatureVector::Dense({1.0})};
  const FiniteDiffReport report = FiniteDiffCheck(p, seq, Matching::kWhole, 1e-6);
  CHECK(report.unmatched);
}

}  // namespace
}  // namespace rlr
