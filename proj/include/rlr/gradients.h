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

#ifndef RLR_GRADIENTS_H_
#define RLR_GRADIENTS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rlr/automaton.h"

namespace rlr {

struct PatternGrads : PatternTensors {
  PatternGrads() = default;
  explicit PatternGrads(const PatternTensors& shape)
      : PatternTensors(shape.num_states, shape.input_dim) {}

  void SetZero();
  PatternGrads& operator+=(const PatternGrads& other);
  PatternGrads& operator*=(double scale);
};

// Branch taken into a state when a symbol is consumed.
enum class SymbolChoice : std::uint8_t { kUnreachable, kSelfLoop, kMain };

// Forward lattice of the log-domain max-plus recurrence. Stage 0 is the
// initial vector, stages 1..n one per consumed symbol, and the final read-out
// at the last state. Every max records its winning branch and the gap to the
// runner-up.
struct Tape {
  std::size_t num_states = 0;
  std::size_t length = 0;
  Matching matching = Matching::kWhole;

  std::vector<double> initial;        // d: log h_0
  std::vector<double> values;         // (n+1) x d: log h_t after epsilon/restart
  std::vector<double> consumed;       // n x d: after the symbol, before epsilon
  std::vector<double> self_logits;    // n x d
  std::vector<double> main_logits;    // n x (d-1)
  std::vector<SymbolChoice> symbol_choice;  // n x d
  std::vector<double> symbol_margin;        // n x d
  std::vector<std::uint8_t> took_epsilon;   // (n+1) x d
  std::vector<double> epsilon_margin;       // (n+1) x d
  std::vector<std::uint8_t> took_restart;   // (n+1) x d, stage 0 unused
  std::vector<double> restart_margin;       // (n+1) x d
  double log_score = 0.0;

  std::size_t num_stages() const { return length + 2; }
  double value(std::size_t stage, std::size_t state) const {
    return values[stage * num_states + state];
  }
};

// Runs the log-domain recurrence, recording every argmax. The returned log
// score is bit-identical to Score(p, seq, {matching, kLog}).
std::pair<double, Tape> ScoreWithTape(const PatternParams& p,
                                      std::span<const FeatureVector> seq,
                                      Matching matching);

// Argmax path recovered from a tape plus the smallest max-gap met along it
// (infinity when every decision was uncontested). Empty steps and
// -inf score mean no successful path.
struct TracedPath {
  PathTrace trace;
  double min_margin = 0.0;
  bool matched = false;
};
TracedPath TraceBestPath(const Tape& tape, const PatternParams& p);

// Gradient of upstream * log score. Max nodes route the full gradient to the
// recorded winner, so parameters off the argmax path get exactly zero.
PatternGrads Backward(const PatternParams& p,
                      std::span<const FeatureVector> seq, const Tape& tape,
                      double upstream);

// Same, accumulated into `grads` (which must have p's shape).
void BackwardAccumulate(const PatternParams& p,
                        std::span<const FeatureVector> seq, const Tape& tape,
                        double upstream, PatternGrads& grads);

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  // The argmax path is within the perturbation reach of a tie; no errors
  // were computed.
  bool near_tie = false;
  // No successful path: the log score is -inf and has no gradient.
  bool unmatched = false;
  std::size_t parameters_checked = 0;
};

// Central differences of the log score against Backward for every parameter.
// Relative error is |analytic - numeric| / max(|analytic|, 1e-8).
FiniteDiffReport FiniteDiffCheck(const PatternParams& p,
                                 std::span<const FeatureVector> seq,
                                 Matching matching, double step);

}  // namespace rlr

#endif  // RLR_GRADIENTS_H_
