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

#ifndef RLR_AUTOMATON_H_
#define RLR_AUTOMATON_H_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rlr/feature_vector.h"
#include "rlr/semiring.h"

namespace rlr {

// Learnable tensors of one pattern with d states over m input features.
// Row i of the weight matrices is stored contiguously (row-major).
struct PatternTensors {
  std::size_t num_states = 0;
  std::size_t input_dim = 0;
  std::vector<double> self_loop_weights;  // d x m
  std::vector<double> self_loop_bias;     // d
  std::vector<double> main_weights;       // (d-1) x m
  std::vector<double> main_bias;          // d-1
  std::vector<double> epsilon_bias;       // d-1

  PatternTensors() = default;
  // Zero-filled. Throws unless num_states >= 2.
  PatternTensors(std::size_t num_states, std::size_t input_dim);

  std::span<const double> self_loop_row(std::size_t state) const {
    return {self_loop_weights.data() + state * input_dim, input_dim};
  }
  std::span<double> self_loop_row(std::size_t state) {
    return {self_loop_weights.data() + state * input_dim, input_dim};
  }
  std::span<const double> main_row(std::size_t state) const {
    return {main_weights.data() + state * input_dim, input_dim};
  }
  std::span<double> main_row(std::size_t state) {
    return {main_weights.data() + state * input_dim, input_dim};
  }

  // Visits the five tensors in a fixed order (self-loop weights, self-loop
  // bias, main weights, main bias, epsilon bias).
  template <typename F>
  void ForEachTensor(F&& f) {
    f(std::span<double>(self_loop_weights));
    f(std::span<double>(self_loop_bias));
    f(std::span<double>(main_weights));
    f(std::span<double>(main_bias));
    f(std::span<double>(epsilon_bias));
  }
  template <typename F>
  void ForEachTensor(F&& f) const {
    f(std::span<const double>(self_loop_weights));
    f(std::span<const double>(self_loop_bias));
    f(std::span<const double>(main_weights));
    f(std::span<const double>(main_bias));
    f(std::span<const double>(epsilon_bias));
  }

  std::size_t parameter_count() const;
  bool SameShape(const PatternTensors& other) const {
    return num_states == other.num_states && input_dim == other.input_dim;
  }
  // Throws std::invalid_argument if any tensor has the wrong length.
  void Validate() const;

  bool operator==(const PatternTensors&) const = default;
};

struct PatternParams : PatternTensors {
  using PatternTensors::PatternTensors;
};

enum class Matching { kWhole, kSubsequence };
enum class Domain { kDirect, kLog };

struct ScoreMode {
  Matching matching = Matching::kSubsequence;
  Domain domain = Domain::kLog;
};

std::string_view MatchingName(Matching matching);
Matching MatchingFromName(std::string_view name);

enum class StepKind { kSelfLoop, kMain, kEpsilon, kRestart };
std::string_view StepKindName(StepKind kind);

struct PathStep {
  std::optional<std::size_t> time;  // 0-based input position; none for epsilon
  StepKind kind = StepKind::kMain;
  std::size_t from_state = 0;
  std::size_t to_state = 0;
  double log_weight = 0.0;
};

struct PathTrace {
  std::vector<PathStep> steps;
  double total_log_score = 0.0;
};

inline double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(sigmoid(z)) = -softplus(-z), stable for large |z| and exact at -inf.
inline double LogSigmoid(double z) {
  if (z >= 0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

// Pre-sigmoid value of the self-loop at `state` / main transition out of
// `state` on input x.
double SelfLoopLogit(const PatternParams& p, std::size_t state,
                     const FeatureVector& x);
double MainLogit(const PatternParams& p, std::size_t state,
                 const FeatureVector& x);

// Transition matrix for one input: sigmoid self-loops on the diagonal,
// sigmoid main-path weights on the superdiagonal.
BandMatrix BuildTransition(const PatternParams& p, const FeatureVector& x);

// Epsilon matrix: sigmoid(epsilon_bias) on the superdiagonal, zero diagonal.
BandMatrix BuildEpsilon(const PatternParams& p);

// Max-product forward score. In the direct domain the result is in [0, 1];
// in the log domain it is its logarithm (possibly -inf). An empty sequence
// is scored by the initial vector alone.
double Score(const PatternParams& p, std::span<const FeatureVector> seq,
             ScoreMode mode);

// Argmax path, or nullopt when no successful path exists (score 0).
std::optional<PathTrace> DecodeBestPath(const PatternParams& p,
                                        std::span<const FeatureVector> seq,
                                        ScoreMode mode);

// Throws std::invalid_argument if any step's width differs from input_dim.
void CheckSequence(const PatternParams& p, std::span<const FeatureVector> seq);

}  // namespace rlr

#endif  // RLR_AUTOMATON_H_
