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
#include "rlr/interpret.h"

namespace rlr {
namespace {

PatternParams WithMainRow(std::vector<double> row, double bias) {
  PatternParams p(2, row.size());
  p.main_weights = std::move(row);
  p.main_bias = {bias};
  return p;
}

TEST_CASE("shortest prefix reaching 80 percent") {
  const PatternParams p = WithMainRow({3.0, 1.0, 0.5}, -2.0);
  const auto a = AttributeTransition(p, FeatureVector::Dense({1, 1, 1}), StepKind::kMain, 0);
  REQUIRE(a.has_value());
  CHECK(a->prefix_length == 2);
  CHECK(a->prefix()[0].feature == 0);
  CHECK(a->prefix()[1].feature == 1);
  CHECK(a->feature_total == 4.5);
  CHECK(a->logit == 2.5);
  CHECK(a->coverage == doctest::Approx(4.0 / 4.5));
}

TEST_CASE("negative totals rank the most negative first") {
  const PatternParams p = WithMainRow({-3.0, 1.0, -0.5}, 0.0);
  const auto a = AttributeTransition(p, FeatureVector::Dense({1, 1, 1}), StepKind::kMain, 0);
  REQUIRE(a.has_value());
  CHECK(a->feature_total == -2.5);
  CHECK(a->sorted.front().feature == 0);
  CHECK(a->prefix_length == 1);  // -3 alone passes 80% of -2.5
}

TEST_CASE("zero contributions and epsilon steps") {
  const PatternParams p = WithMainRow({2.0, 5.0}, 0.0);
  const auto a = AttributeTransition(p, FeatureVector::Sparse(2, {0}, {1.0}), StepKind::kMain, 0);
  REQUIRE(a.has_value());
  CHECK(a->sorted.size() == 1);
  CHECK(a->coverage == 1.0);
  const auto none = AttributeTransition(p, FeatureVector::Dense({0, 0}), StepKind::kMain, 0);
  CHECK(none->prefix_length == 0);
  CHECK(none->coverage == 0.0);
  CHECK_FALSE(AttributeTransition(p, FeatureVector::Dense({1, 1}), StepKind::kEpsilon, 0));
}

TEST_CASE("importance ranks by leave-one-out change") {
  std::mt19937_64 rng(15);
  const std::vector<PatternSpec> specs = {{3, 3}};
  const RlrModel model = InitModel(3, specs, {1, 4}, Matching::kSubsequence, 2);
  const Sequence seq = oracle::RandomSequence(6, 3, rng);
  const auto ranked = PatternImportanceFor(model, seq);
  REQUIRE(ranked.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) CHECK(ranked[r].rank == r);
  CHECK(ranked[0].delta >= ranked[1].delta);
  CHECK(ranked[1].delta >= ranked[2].delta);
  std::vector<double> scores = PatternLogScores(model, seq);
  const double full = PredictFromLogScores(model, scores);
  scores[ranked[0].pattern_index] = -INFINITY;
  CHECK(ranked[0].delta == doctest::Approx(std::abs(full - PredictFromLogScores(model, scores))));
}

TEST_CASE("population importance is the mean per-record change") {
  std::mt19937_64 rng(16);
  const std::vector<PatternSpec> specs = {{2, 3}};
  const RlrModel model = InitModel(2, specs, {1, 4}, Matching::kSubsequence, 3);
  Dataset d;
  d.feature_dim = 2;
  for (int i = 0; i < 20; ++i)
    d.records.push_back({std::to_string(i), oracle::RandomSequence(5, 2, rng), i % 2});
  std::vector<double> mean(2, 0.0);
  for (const auto& r : d.records) {
    for (const auto& imp : PatternImportanceFor(model, r.steps))
      mean[imp.pattern_index] += imp.delta / 20;
  }
  for (const auto& imp : PopulationImportance(model, d)) {
    CHECK(imp.delta == doctest::Approx(mean[imp.pattern_index]).epsilon(1e-12));
  }
}

TEST_CASE("window runs from the restart to arrival at the final state") {
  PathTrace t;
  t.steps = {{2, StepKind::kRestart, 0, 0, 0.0}, {2, StepKind::kMain, 0, 1, -0.1},
             {3, StepKind::kSelfLoop, 1, 1, -0.1}, {4, StepKind::kMain, 1, 2, -0.1},
             {5, StepKind::kSelfLoop, 2, 2, -0.1}};
  const MatchWindow w = WindowOf(t);
  CHECK(w.start == 2);
  CHECK(w.end == std::optional<std::size_t>(4));
}

TEST_CASE("explanations serialize and render") {
  std::mt19937_64 rng(17);
  const std::vector<PatternSpec> specs = {{2, 3}};
  const RlrModel model = InitModel(2, specs, {1, 4}, Matching::kSubsequence, 4);
  const SequenceRecord rec{"rec", oracle::RandomSequence(6, 2, rng, false), 1};
  const Explanation e = Explain(model, rec, 1);
  REQUIRE(e.patterns.size() == 1);
  const nlohmann::json j = ExplanationToJson(e, {"hr", "bp"});
  CHECK(j.at("record_id") == "rec");
  CHECK(j.at("patterns").size() == 1);
  CHECK(j.at("patterns")[0].contains("steps"));
  CHECK(RenderExplanation(e, {"hr", "bp"}).find("pattern") != std::string::npos);
  CHECK(Explain(model, rec, 0).patterns.size() == 2);
}

}  // namespace
}  // namespace rlr
