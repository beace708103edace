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

#ifndef RLR_BATCH_H_
#define RLR_BATCH_H_

#include <cstddef>
#include <span>
#include <vector>

#include "rlr/data.h"
#include "rlr/model.h"

namespace rlr {

// Dataset inputs after the model's feature transform, with views that stay
// valid for the lifetime of the object (it is move-only).
class PreparedInputs {
 public:
  PreparedInputs(const RlrModel& model, const Dataset& dataset);
  PreparedInputs(PreparedInputs&&) = default;
  PreparedInputs& operator=(PreparedInputs&&) = default;
  PreparedInputs(const PreparedInputs&) = delete;
  PreparedInputs& operator=(const PreparedInputs&) = delete;

  std::size_t size() const { return views_.size(); }
  std::span<const FeatureVector> input(std::size_t i) const { return views_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }

 private:
  std::vector<Sequence> owned_;
  std::vector<std::span<const FeatureVector>> views_;
  std::vector<int> labels_;
};

// Number of OpenMP threads a request resolves to (<= 0 means the runtime
// default).
int ResolveThreads(int requested);

// Model probabilities for every prepared input. The parallel kernel splits
// examples across threads; the serial reference is kept for testing.
std::vector<double> PredictBatch(const RlrModel& model,
                                 const PreparedInputs& inputs, int threads);
std::vector<double> PredictBatchSerial(const RlrModel& model,
                                       const PreparedInputs& inputs);

// Sum of BCE over `indices`, accumulating scale * gradient into `grads`.
// Each thread accumulates privately over a static block of examples and the
// partial gradients are summed in thread order, so results are reproducible
// for a fixed thread count and bit-identical to the serial kernel when
// threads == 1.
double BatchGradient(const RlrModel& model, const PreparedInputs& inputs,
                     std::span<const std::size_t> indices, double scale,
                     ModelGrads& grads, int threads);
double BatchGradientSerial(const RlrModel& model, const PreparedInputs& inputs,
                           std::span<const std::size_t> indices, double scale,
                           ModelGrads& grads);

}  // namespace rlr

#endif  // RLR_BATCH_H_
