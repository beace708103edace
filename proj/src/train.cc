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

#include "rlr/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "rlr/batch.h"
#include "rlr/errors.h"
#include "rlr/metrics.h"

namespace rlr {
namespace {

class Adam {
 public:
  Adam(RlrModel& model, const TrainConfig& config) : config_(config) {
    ModelGrads zero(model);
    ForEachParameter(model, zero, [&](std::span<double> p, std::span<const double>) {
      first_.emplace_back(p.size(), 0.0);
      second_.emplace_back(p.size(), 0.0);
    });
  }

  void Step(RlrModel& model, const ModelGrads& grads) {
    ++step_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    std::size_t block = 0;
    ForEachParameter(model, grads, [&](std::span<double> p, std::span<const double> g) {
      std::vector<double>& m = first_[block];
      std::vector<double>& v = second_[block];
      ++block;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) continue;  // saturated parameters are frozen
        m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
        v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
        p[i] -= config_.learning_rate * (m[i] / c1) /
                (std::sqrt(v[i] / c2) + config_.adam_epsilon);
      }
    });
  }

 private:
  const TrainConfig& config_;
  std::size_t step_ = 0;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
};

// Block soft-threshold: theta <- theta * max(0, 1 - threshold / ||theta||).
void ProximalGroupShrink(RlrModel& model, double threshold) {
  for (PatternParams& p : model.patterns) {
    const double norm = PatternNorm(p);
    if (norm == 0.0) continue;
    const double factor = std::max(0.0, 1.0 - threshold / norm);
    p.ForEachTensor([factor](std::span<double> t) {
      for (double& v : t) {
        if (std::isfinite(v)) v *= factor;
      }
    });
  }
}

bool AllFinite(const ModelGrads& grads) {
  for (const PatternGrads& g : grads.patterns) {
    bool ok = true;
    g.ForEachTensor([&](std::span<const double> t) {
      for (double v : t) ok = ok && std::isfinite(v);
    });
    if (!ok) return false;
  }
  for (const LayerGrads& g : grads.layers) {
    for (double v : g.weights) if (!std::isfinite(v)) return false;
    for (double v : g.bias) if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in [0, 1)");
  if (!(adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be > 0");
  if (!(l2_lambda >= 0.0)) throw ConfigError("l2_lambda must be >= 0");
}

TrainResult Train(RlrModel model, const Dataset& train, const Dataset& val,
                  const TrainConfig& config) {
  config.Validate();
  model.Validate();
  TrainResult result;
  if (config.epochs == 0) {
    result.model = std::move(model);
    return result;
  }
  if (train.empty()) throw DataError("training set is empty");
  const int threads = config.deterministic ? 1 : config.threads;

  const PreparedInputs train_inputs(model, train);
  const PreparedInputs val_inputs(model, val);
  Adam adam(model, config);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_inputs.size());
  std::iota(order.begin(), order.end(), 0);

  RlrModel best = model;
  double best_metric = -std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  std::size_t since_best = 0;
  ModelGrads grads(model);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_bce = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, count);
      grads.SetZero();
      const double scale = 1.0 / static_cast<double>(count);
      const double bce = BatchGradient(model, train_inputs, batch, scale, grads, threads);
      if (config.penalty == PenaltyKind::kSquared) {
        AccumulatePenaltyGradient(model, config.l2_lambda, config.penalty, 1.0, grads);
      }
      if (!std::isfinite(bce) || !AllFinite(grads)) {
        throw NumericError("non-finite loss or gradient in epoch " +
                           std::to_string(epoch) + " at batch offset " +
                           std::to_string(start));
      }
      adam.Step(model, grads);
      if (config.penalty == PenaltyKind::kGroup && config.l2_lambda > 0.0) {
        ProximalGroupShrink(model, config.learning_rate * config.l2_lambda);
      }
      epoch_bce += bce;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_bce / static_cast<double>(order.size()) +
                        Penalty(model, config.l2_lambda, config.penalty);
    double metric = -record.train_loss;
    if (val_inputs.size() > 0) {
      const std::vector<double> probs = PredictBatch(model, val_inputs, threads);
      record.val_ll = MeanLogLikelihood(probs, val_inputs.labels());
      record.val_auroc = Auroc(probs, val_inputs.labels());
      record.val_auprc = Auprc(probs, val_inputs.labels());
      metric = record.val_ll;
    } else {
      record.val_ll = metric;
    }
    if (!std::isfinite(record.train_loss) || !std::isfinite(metric)) {
      throw NumericError("non-finite loss after epoch " + std::to_string(epoch));
    }
    result.history.push_back(record);

    if (metric > best_metric) {
      best_metric = metric;
      best = model;
      best_epoch = epoch;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }

  best.metadata.seed = config.seed;
  best.metadata.epochs_run = result.history.size();
  best.metadata.best_epoch = best_epoch;
  best.metadata.best_val_ll = best_metric;
  result.model = std::move(best);
  return result;
}

TrainResult TrainLrBaseline(const Dataset& train, const Dataset& val,
                            const TrainConfig& config) {
  const std::vector<double> zeros(4 * train.feature_dim, 0.0);
  RlrModel model = MakeLrEquivalent(zeros, 0.0);
  model.feature_dim = train.feature_dim;
  model.transform = FeatureTransform::kFlatten;
  return Train(std::move(model), train, val, config);
}

}  // namespace rlr
