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

#include "rlr/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "rlr/errors.h"

namespace rlr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double Activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0 ? z : 0.0;
    case Activation::kSigmoid:
      return Sigmoid(z);
    case Activation::kIdentity:
      return z;
  }
  return z;
}

double ActivationSlope(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0 ? 1.0 : 0.0;
    case Activation::kSigmoid: {
      const double s = Sigmoid(z);
      return s * (1.0 - s);
    }
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

// Inputs and pre-activations of every layer, kept for backprop.
struct HeadTrace {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> pre;
};

double HeadForward(const MlpHead& head, std::vector<double> scores,
                   HeadTrace* trace) {
  std::vector<double> x = std::move(scores);
  for (const DenseLayer& layer : head.layers) {
    std::vector<double> z(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      double acc = layer.bias[o];
      const double* row = layer.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    std::vector<double> out(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) out[o] = Activate(layer.activation, z[o]);
    if (trace != nullptr) {
      trace->inputs.push_back(std::move(x));
      trace->pre.push_back(std::move(z));
    }
    x = std::move(out);
  }
  return x[0];
}

// logit(exp(log_score)) without cancellation near s = 1.
double PassthroughLogit(double log_score) {
  return log_score - std::log(-std::expm1(log_score));
}

std::vector<double> ExpScores(std::span<const double> log_scores) {
  std::vector<double> s(log_scores.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(log_scores[i]);
  return s;
}

}  // namespace

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kIdentity:
      return "identity";
  }
  return "identity";
}

Activation ActivationFromName(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "identity") return Activation::kIdentity;
  throw std::invalid_argument("unknown activation: " + std::string(name));
}

void MlpHead::Validate(std::size_t num_patterns) const {
  if (layers.empty()) {
    if (num_patterns != 1) {
      throw std::invalid_argument("pass-through head needs exactly one pattern");
    }
    return;
  }
  std::size_t width = num_patterns;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    if (layer.inputs != width || layer.weights.size() != layer.inputs * layer.outputs ||
        layer.bias.size() != layer.outputs || layer.outputs == 0) {
      throw std::invalid_argument("head layer " + std::to_string(l) +
                                  " has inconsistent shape");
    }
    width = layer.outputs;
  }
  if (width != 1) throw std::invalid_argument("head must end in a single logit");
}

std::size_t RlrModel::pattern_input_dim() const {
  return transform == FeatureTransform::kFlatten ? 4 * feature_dim : feature_dim;
}

void RlrModel::Validate() const {
  if (patterns.empty()) throw std::invalid_argument("model has no patterns");
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    patterns[i].Validate();
    if (patterns[i].input_dim != pattern_input_dim()) {
      throw std::invalid_argument("pattern " + std::to_string(i) + " input_dim " +
                                  std::to_string(patterns[i].input_dim) +
                                  " != " + std::to_string(pattern_input_dim()));
    }
  }
  head.Validate(patterns.size());
}

ModelGrads::ModelGrads(const RlrModel& model) {
  for (const PatternParams& p : model.patterns) patterns.emplace_back(p);
  for (const DenseLayer& layer : model.head.layers) {
    layers.push_back({std::vector<double>(layer.weights.size(), 0.0),
                      std::vector<double>(layer.bias.size(), 0.0)});
  }
}

void ModelGrads::SetZero() {
  for (PatternGrads& g : patterns) g.SetZero();
  for (LayerGrads& g : layers) {
    std::fill(g.weights.begin(), g.weights.end(), 0.0);
    std::fill(g.bias.begin(), g.bias.end(), 0.0);
  }
}

ModelGrads& ModelGrads::operator+=(const ModelGrads& other) {
  for (std::size_t i = 0; i < patterns.size(); ++i) patterns[i] += other.patterns[i];
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t k = 0; k < layers[l].weights.size(); ++k) {
      layers[l].weights[k] += other.layers[l].weights[k];
    }
    for (std::size_t k = 0; k < layers[l].bias.size(); ++k) {
      layers[l].bias[k] += other.layers[l].bias[k];
    }
  }
  return *this;
}

ModelGrads& ModelGrads::operator*=(double scale) {
  for (PatternGrads& g : patterns) g *= scale;
  for (LayerGrads& g : layers) {
    for (double& v : g.weights) v *= scale;
    for (double& v : g.bias) v *= scale;
  }
  return *this;
}

std::vector<double> FlattenFeatures(std::span<const FeatureVector> seq) {
  if (seq.empty()) throw std::invalid_argument("cannot flatten an empty sequence");
  const std::size_t m = seq.front().dim();
  const double n = static_cast<double>(seq.size());
  std::vector<std::vector<double>> dense;
  dense.reserve(seq.size());
  for (const FeatureVector& x : seq) {
    if (x.dim() != m) throw std::invalid_argument("flatten: ragged sequence");
    dense.push_back(x.ToDense());
  }
  std::vector<double> out(4 * m);
  for (std::size_t j = 0; j < m; ++j) {
    double lo = dense[0][j];
    double hi = dense[0][j];
    double sum = 0.0;
    for (const auto& row : dense) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
      sum += row[j];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& row : dense) ss += (row[j] - mean) * (row[j] - mean);
    out[4 * j + 0] = lo;
    out[4 * j + 1] = hi;
    out[4 * j + 2] = mean;
    out[4 * j + 3] = std::sqrt(ss / n);
  }
  return out;
}

Sequence TransformInput(const RlrModel& model,
                        std::span<const FeatureVector> seq) {
  for (const FeatureVector& x : seq) {
    if (x.dim() != model.feature_dim) {
      throw DataError("input width " + std::to_string(x.dim()) +
                      " != model feature_dim " + std::to_string(model.feature_dim));
    }
  }
  if (model.transform == FeatureTransform::kFlatten) {
    return {FeatureVector::Dense(FlattenFeatures(seq))};
  }
  return Sequence(seq.begin(), seq.end());
}

std::vector<double> PatternLogScores(const RlrModel& model,
                                     std::span<const FeatureVector> input) {
  std::vector<double> scores(model.patterns.size());
  const ScoreMode mode{model.matching, Domain::kLog};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = Score(model.patterns[i], input, mode);
  }
  return scores;
}

double HeadLogit(const MlpHead& head, std::span<const double> log_scores) {
  if (head.is_passthrough()) return PassthroughLogit(log_scores[0]);
  return HeadForward(head, ExpScores(log_scores), nullptr);
}

double PredictFromLogScores(const RlrModel& model,
                            std::span<const double> log_scores) {
  return Sigmoid(HeadLogit(model.head, log_scores));
}

double Predict(const RlrModel& model, std::span<const FeatureVector> seq) {
  if (model.transform == FeatureTransform::kNone) {
    for (const FeatureVector& x : seq) {
      if (x.dim() != model.feature_dim) {
        throw DataError("input width " + std::to_string(x.dim()) +
                        " != model feature_dim " + std::to_string(model.feature_dim));
      }
    }
    return PredictFromLogScores(model, PatternLogScores(model, seq));
  }
  const Sequence input = TransformInput(model, seq);
  return PredictFromLogScores(model, PatternLogScores(model, input));
}

RlrModel MakeLrEquivalent(std::span<const double> weights, double bias) {
  RlrModel model;
  model.feature_dim = weights.size();
  model.matching = Matching::kWhole;
  PatternParams p(2, weights.size());
  std::copy(weights.begin(), weights.end(), p.main_weights.begin());
  p.main_bias[0] = bias;
  p.epsilon_bias[0] = kNegInf;
  model.patterns.push_back(std::move(p));
  model.metadata.kind = "lr-baseline";
  return model;
}

double PatternNorm(const PatternParams& p) {
  double ss = 0.0;
  p.ForEachTensor([&](std::span<const double> t) {
    for (double v : t) {
      if (std::isfinite(v)) ss += v * v;
    }
  });
  return std::sqrt(ss);
}

double Penalty(const RlrModel& model, double lambda, PenaltyKind kind) {
  if (lambda == 0.0) return 0.0;
  double total = 0.0;
  for (const PatternParams& p : model.patterns) {
    const double norm = PatternNorm(p);
    total += kind == PenaltyKind::kGroup ? norm : norm * norm;
  }
  return lambda * total;
}

double BinaryCrossEntropy(double prob, int label) {
  const double p = std::clamp(prob, 1e-12, 1.0 - 1e-12);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

double Loss(const RlrModel& model, std::span<const SequenceRecord> batch,
            double l2_lambda, PenaltyKind kind) {
  if (batch.empty()) throw std::invalid_argument("loss of an empty batch");
  double total = 0.0;
  for (const SequenceRecord& r : batch) {
    total += BinaryCrossEntropy(Predict(model, r.steps), r.label);
  }
  return total / static_cast<double>(batch.size()) + Penalty(model, l2_lambda, kind);
}

double AccumulateExampleGradient(const RlrModel& model,
                                 std::span<const FeatureVector> input,
                                 int label, double scale, ModelGrads& grads) {
  const std::size_t k = model.patterns.size();
  std::vector<double> log_scores(k);
  std::vector<Tape> tapes(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto [score, tape] = ScoreWithTape(model.patterns[i], input, model.matching);
    log_scores[i] = score;
    tapes[i] = std::move(tape);
  }
  const double y = static_cast<double>(label);
  std::vector<double> upstream(k, 0.0);  // d BCE / d log score
  double prob = 0.0;

  if (model.head.is_passthrough()) {
    prob = Sigmoid(PassthroughLogit(log_scores[0]));
    // d logit / d log s = 1 / (1 - s)
    upstream[0] = (prob - y) / -std::expm1(log_scores[0]);
  } else {
    HeadTrace trace;
    const std::vector<double> scores = ExpScores(log_scores);
    prob = Sigmoid(HeadForward(model.head, scores, &trace));
    std::vector<double> delta = {prob - y};  // d BCE / d head output
    for (std::size_t l = model.head.layers.size(); l-- > 0;) {
      const DenseLayer& layer = model.head.layers[l];
      LayerGrads& g = grads.layers[l];
      std::vector<double> dpre(layer.outputs);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        dpre[o] = delta[o] * ActivationSlope(layer.activation, trace.pre[l][o]);
      }
      std::vector<double> dinput(layer.inputs, 0.0);
      const std::vector<double>& in = trace.inputs[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        if (dpre[o] == 0.0) continue;
        const double* row = layer.weights.data() + o * layer.inputs;
        double* grow = g.weights.data() + o * layer.inputs;
        for (std::size_t i = 0; i < layer.inputs; ++i) {
          grow[i] += scale * dpre[o] * in[i];
          dinput[i] += row[i] * dpre[o];
        }
        g.bias[o] += scale * dpre[o];
      }
      delta = std::move(dinput);
    }
    for (std::size_t i = 0; i < k; ++i) upstream[i] = delta[i] * scores[i];
  }

  for (std::size_t i = 0; i < k; ++i) {
    if (upstream[i] != 0.0) {
      BackwardAccumulate(model.patterns[i], input, tapes[i], scale * upstream[i],
                         grads.patterns[i]);
    }
  }
  return BinaryCrossEntropy(prob, label);
}

void AccumulatePenaltyGradient(const RlrModel& model, double lambda,
                               PenaltyKind kind, double scale,
                               ModelGrads& grads) {
  if (lambda == 0.0) return;
  for (std::size_t i = 0; i < model.patterns.size(); ++i) {
    const PatternParams& p = model.patterns[i];
    double factor = 2.0 * lambda * scale;
    if (kind == PenaltyKind::kGroup) {
      const double norm = PatternNorm(p);
      if (norm == 0.0) continue;
      factor = lambda * scale / norm;
    }
    std::vector<std::span<const double>> params;
    p.ForEachTensor([&](std::span<const double> t) { params.push_back(t); });
    std::size_t block = 0;
    grads.patterns[i].ForEachTensor([&](std::span<double> g) {
      const std::span<const double> theta = params[block++];
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (std::isfinite(theta[j])) g[j] += factor * theta[j];
      }
    });
  }
}

double LossAndGradient(const RlrModel& model,
                       std::span<const SequenceRecord> batch, double l2_lambda,
                       PenaltyKind kind, ModelGrads& grads) {
  if (batch.empty()) throw std::invalid_argument("loss of an empty batch");
  grads = ModelGrads(model);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const SequenceRecord& r : batch) {
    const Sequence input = TransformInput(model, r.steps);
    total += AccumulateExampleGradient(model, input, r.label, scale, grads);
  }
  AccumulatePenaltyGradient(model, l2_lambda, kind, 1.0, grads);
  return total * scale + Penalty(model, l2_lambda, kind);
}

RlrModel InitModel(std::size_t feature_dim,
                   std::span<const PatternSpec> patterns, HeadSpec head,
                   Matching matching, std::uint64_t seed) {
  if (head.depth == 0) throw std::invalid_argument("head depth must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> weight(0.0, 0.1);
  RlrModel model;
  model.feature_dim = feature_dim;
  model.matching = matching;
  model.metadata.seed = seed;
  for (const PatternSpec& spec : patterns) {
    if (spec.count == 0) throw std::invalid_argument("pattern count must be >= 1");
    for (std::size_t c = 0; c < spec.count; ++c) {
      PatternParams p(spec.states, feature_dim);
      for (double& v : p.self_loop_weights) v = weight(rng);
      for (double& v : p.main_weights) v = weight(rng);
      model.patterns.push_back(std::move(p));
    }
  }
  std::size_t width = model.patterns.size();
  for (std::size_t l = 0; l < head.depth; ++l) {
    const bool last = l + 1 == head.depth;
    DenseLayer layer;
    layer.inputs = width;
    layer.outputs = last ? 1 : head.hidden;
    layer.activation = last ? Activation::kIdentity : Activation::kRelu;
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    std::uniform_real_distribution<double> glorot(-limit, limit);
    layer.weights.resize(layer.inputs * layer.outputs);
    for (double& v : layer.weights) v = glorot(rng);
    layer.bias.assign(layer.outputs, 0.0);
    width = layer.outputs;
    model.head.layers.push_back(std::move(layer));
  }
  model.Validate();
  return model;
}

}  // namespace rlr
