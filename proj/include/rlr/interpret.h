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

#ifndef RLR_INTERPRET_H_
#define RLR_INTERPRET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rlr/automaton.h"
#include "rlr/data.h"
#include "rlr/model.h"

namespace rlr {

struct PatternImportance {
  std::size_t pattern_index = 0;
  double delta = 0.0;  // |prediction change| when the score is zeroed
  std::size_t rank = 0;  // 0 = most important
};

// Leave-one-out importance: delta_i = |predict - predict with score i set to
// zero before the head|, ranked by descending delta, ties to lower index.
std::vector<PatternImportance> PatternImportanceFor(
    const RlrModel& model, std::span<const FeatureVector> seq);

// Mean per-record |change| over a nonempty dataset, ranked the same way.
std::vector<PatternImportance> PopulationImportance(const RlrModel& model,
                                                    const Dataset& dataset);

struct FeatureContribution {
  std::size_t feature = 0;
  double contribution = 0.0;  // weight_j * x_j
};

struct TransitionAttribution {
  double logit = 0.0;          // full pre-sigmoid value, bias included
  double bias = 0.0;
  double feature_total = 0.0;  // sum_j weight_j * x_j
  // Nonzero contributions, descending when feature_total > 0, otherwise
  // ascending (most negative first).
  std::vector<FeatureContribution> sorted;
  // Length of the shortest prefix of `sorted` whose sum reaches 80% of
  // feature_total (sign-matched when the total is negative).
  std::size_t prefix_length = 0;
  double coverage = 0.0;  // prefix sum / feature_total; 0 when the total is 0

  std::span<const FeatureContribution> prefix() const {
    return std::span<const FeatureContribution>(sorted).first(prefix_length);
  }
};

inline constexpr double kAttributionCoverage = 0.8;

// Attribution of a consuming step (self-loop at `state` or main transition
// out of `state`). Epsilon and restart steps carry no features: nullopt.
std::optional<TransitionAttribution> AttributeTransition(
    const PatternParams& p, const FeatureVector& x, StepKind kind,
    std::size_t state);

struct MatchWindow {
  std::size_t start = 0;  // restart time (0 in whole mode)
  // Time of the symbol after which the final state was first reached; none
  // when it was reached before consuming anything.
  std::optional<std::size_t> end;
};

struct StepExplanation {
  PathStep step;
  std::optional<TransitionAttribution> attribution;
};

struct PatternExplanation {
  PatternImportance importance;
  std::size_t num_states = 0;
  double score = 0.0;  // direct domain
  bool matched = false;
  std::optional<MatchWindow> window;
  std::vector<StepExplanation> steps;
  double total_log_score = 0.0;
};

struct Explanation {
  std::string record_id;
  double prediction = 0.0;
  std::vector<PatternExplanation> patterns;  // in importance order
};

MatchWindow WindowOf(const PathTrace& trace);

// Ranked patterns (top_k of them; 0 means all), each with its best path
// under the model's matching mode and per-step attributions.
Explanation Explain(const RlrModel& model, const SequenceRecord& record,
                    std::size_t top_k);

// Machine-readable document, one per record (see README for the schema).
nlohmann::json ExplanationToJson(const Explanation& explanation,
                                 const std::vector<std::string>& feature_names);

// Plain-text narrative: "pattern 2 (4 states) matched from time 12 ...".
std::string RenderExplanation(const Explanation& explanation,
                              const std::vector<std::string>& feature_names);

}  // namespace rlr

#endif  // RLR_INTERPRET_H_
