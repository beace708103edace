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

#ifndef RLR_TRAIN_H_
#define RLR_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rlr/data.h"
#include "rlr/model.h"

namespace rlr {

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double l2_lambda = 0.0;
  PenaltyKind penalty = PenaltyKind::kGroup;
  std::uint64_t seed = 0;
  // Stop after this many epochs without a better validation LL; 0 disables.
  std::size_t patience = 10;
  int threads = 0;  // <= 0: OpenMP default
  bool deterministic = false;  // forces one thread

  // Throws ConfigError naming the first invalid field.
  void Validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_ll = 0.0;
  std::optional<double> val_auroc;
  std::optional<double> val_auprc;
};

struct TrainResult {
  RlrModel model;  // best-validation-LL snapshot
  std::vector<EpochRecord> history;
};

// Minibatch Adam on mean BCE. The group penalty is applied as a proximal
// step after each update (block soft-thresholding by lr * lambda), which
// drives whole patterns to exactly zero; the squared penalty is added to the
// gradient. With an empty validation set the training loss selects the
// snapshot. Throws NumericError on a non-finite loss.
TrainResult Train(RlrModel model, const Dataset& train, const Dataset& val,
                  const TrainConfig& config);

// Logistic regression on flattened (min, max, mean, std) features, built as
// MakeLrEquivalent over the 4m-wide space and trained by Train.
TrainResult TrainLrBaseline(const Dataset& train, const Dataset& val,
                            const TrainConfig& config);

}  // namespace rlr

#endif  // RLR_TRAIN_H_
