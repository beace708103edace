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

#ifndef RLR_MODEL_H_
#define RLR_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlr/automaton.h"
#include "rlr/data.h"
#include "rlr/gradients.h"

namespace rlr {

enum class Activation { kRelu, kSigmoid, kIdentity };
std::string_view ActivationName(Activation activation);
Activation ActivationFromName(std::string_view name);

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;     // outputs
  Activation activation = Activation::kIdentity;

  bool operator==(const DenseLayer&) const = default;
};

// MLP over the stacked pattern scores. The last layer emits one logit. With
// no layers the head is a pass-through: it takes a single pattern score s
// and emits logit(s), so the model probability is s itself.
struct MlpHead {
  std::vector<DenseLayer> layers;

  bool is_passthrough() const { return layers.empty(); }
  // Throws std::invalid_argument unless widths chain from `num_patterns` to 1.
  void Validate(std::size_t num_patterns) const;

  bool operator==(const MlpHead&) const = default;
};

// Applied to a raw sequence before scoring. kFlatten replaces the sequence
// with one step holding (min, max, mean, std) per feature.
enum class FeatureTransform { kNone, kFlatten };

struct TrainingMetadata {
  std::string kind = "rlr";  // "rlr" or "lr-baseline"
  std::uint64_t seed = 0;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double best_val_ll = 0.0;

  bool operator==(const TrainingMetadata&) const = default;
};

struct RlrModel {
  std::size_t feature_dim = 0;
  FeatureTransform transform = FeatureTransform::kNone;
  Matching matching = Matching::kSubsequence;
  std::vector<PatternParams> patterns;
  MlpHead head;
  TrainingMetadata metadata;

  // Width each pattern consumes: feature_dim, or 4 * feature_dim when
  // flattening.
  std::size_t pattern_input_dim() const;
  void Validate() const;

  bool operator==(const RlrModel&) const = default;
};

struct LayerGrads {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct ModelGrads {
  std::vector<PatternGrads> patterns;
  std::vector<LayerGrads> layers;

  ModelGrads() = default;
  explicit ModelGrads(const RlrModel& model);
  void SetZero();
  ModelGrads& operator+=(const ModelGrads& other);
  ModelGrads& operator*=(double scale);
};

// Visits every (parameter tensor, gradient tensor) pair in a fixed order:
// patterns first (in PatternTensors order), then head layers (weights, bias).
template <typename F>
void ForEachParameter(RlrModel& model, const ModelGrads& grads, F&& f) {
  for (std::size_t p = 0; p < model.patterns.size(); ++p) {
    std::vector<std::span<const double>> g;
    grads.patterns[p].ForEachTensor([&](std::span<const double> t) { g.push_back(t); });
    std::size_t k = 0;
    model.patterns[p].ForEachTensor([&](std::span<double> t) { f(t, g[k++]); });
  }
  for (std::size_t l = 0; l < model.head.layers.size(); ++l) {
    f(std::span<double>(model.head.layers[l].weights),
      std::span<const double>(grads.layers[l].weights));
    f(std::span<double>(model.head.layers[l].bias),
      std::span<const double>(grads.layers[l].bias));
  }
}

// Per feature: (min, max, mean, population std) over time, concatenated in
// that order for feature 0, 1, ... Throws std::invalid_argument if empty.
std::vector<double> FlattenFeatures(std::span<const FeatureVector> seq);

// The sequence the patterns actually see under the model's transform.
Sequence TransformInput(const RlrModel& model,
                        std::span<const FeatureVector> seq);

// Log-domain pattern scores for an already transformed input.
std::vector<double> PatternLogScores(const RlrModel& model,
                                     std::span<const FeatureVector> input);

// Head output logit from log pattern scores; the MLP consumes exp(log score).
double HeadLogit(const MlpHead& head, std::span<const double> log_scores);

// sigmoid(HeadLogit). Setting an entry to -inf zeroes that pattern's score.
double PredictFromLogScores(const RlrModel& model,
                            std::span<const double> log_scores);

// Probability of the positive class for a raw sequence.
double Predict(const RlrModel& model, std::span<const FeatureVector> seq);

// One 2-state pattern with the epsilon transition disabled, main path
// weights/bias as given, and a pass-through head:
// Predict(model, {x}) == sigmoid(weights . x + bias).
RlrModel MakeLrEquivalent(std::span<const double> weights, double bias);

enum class PenaltyKind { kGroup, kSquared };

// Group penalty: lambda * sum_p ||theta_p||_2 (unsquared). Squared:
// lambda * sum_p ||theta_p||^2. Non-finite parameters are frozen constants
// and excluded.
double PatternNorm(const PatternParams& p);
double Penalty(const RlrModel& model, double lambda, PenaltyKind kind);

// BCE with predictions clamped to [1e-12, 1 - 1e-12].
double BinaryCrossEntropy(double prob, int label);

// Mean BCE over the batch plus the penalty. Throws on an empty batch.
double Loss(const RlrModel& model, std::span<const SequenceRecord> batch,
            double l2_lambda, PenaltyKind kind = PenaltyKind::kGroup);

// BCE of one transformed input; accumulates scale * d(BCE)/d(theta) into
// `grads` through the head and every pattern's argmax path.
double AccumulateExampleGradient(const RlrModel& model,
                                 std::span<const FeatureVector> input,
                                 int label, double scale, ModelGrads& grads);

// Adds scale * d(Penalty)/d(theta). The group norm contributes
// lambda * theta / ||theta|| (zero at the origin).
void AccumulatePenaltyGradient(const RlrModel& model, double lambda,
                               PenaltyKind kind, double scale,
                               ModelGrads& grads);

// Loss(...) and its full gradient (mean BCE + penalty).
double LossAndGradient(const RlrModel& model,
                       std::span<const SequenceRecord> batch, double l2_lambda,
                       PenaltyKind kind, ModelGrads& grads);

struct PatternSpec {
  std::size_t count = 1;
  std::size_t states = 3;
};

struct HeadSpec {
  // Number of dense layers; depth 1 is a logistic layer over the scores,
  // depth >= 2 adds relu hidden layers of width `hidden`.
  std::size_t depth = 1;
  std::size_t hidden = 16;
};

// Pattern weights ~ N(0, 0.1^2), biases 0 (so sigmoid(epsilon) = 0.5),
// head Glorot-uniform with zero bias.
RlrModel InitModel(std::size_t feature_dim,
                   std::span<const PatternSpec> patterns, HeadSpec head,
                   Matching matching, std::uint64_t seed);

}  // namespace rlr

#endif  // RLR_MODEL_H_
