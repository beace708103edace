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

#include "rlr/batch.h"

#include <omp.h>

#include <exception>

#include "rlr/errors.h"

namespace rlr {

PreparedInputs::PreparedInputs(const RlrModel& model, const Dataset& dataset) {
  if (dataset.feature_dim != model.feature_dim && !dataset.empty()) {
    throw DataError("dataset feature_dim " + std::to_string(dataset.feature_dim) +
                    " != model feature_dim " + std::to_string(model.feature_dim));
  }
  labels_.reserve(dataset.size());
  if (model.transform == FeatureTransform::kNone) {
    for (const SequenceRecord& r : dataset.records) {
      views_.emplace_back(r.steps);
      labels_.push_back(r.label);
    }
    return;
  }
  owned_.reserve(dataset.size());
  for (const SequenceRecord& r : dataset.records) {
    owned_.push_back(TransformInput(model, r.steps));
    labels_.push_back(r.label);
  }
  for (const Sequence& s : owned_) views_.emplace_back(s);
}

int ResolveThreads(int requested) {
  return requested > 0 ? requested : omp_get_max_threads();
}

std::vector<double> PredictBatchSerial(const RlrModel& model,
                                       const PreparedInputs& inputs) {
  std::vector<double> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out[i] = PredictFromLogScores(model, PatternLogScores(model, inputs.input(i)));
  }
  return out;
}

std::vector<double> PredictBatch(const RlrModel& model,
                                 const PreparedInputs& inputs, int threads) {
  std::vector<double> out(inputs.size());
  const long n = static_cast<long>(inputs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(ResolveThreads(threads))
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = PredictFromLogScores(model, PatternLogScores(model, inputs.input(i)));
    } catch (...) {
#pragma omp critical(rlr_predict_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double BatchGradientSerial(const RlrModel& model, const PreparedInputs& inputs,
                           std::span<const std::size_t> indices, double scale,
                           ModelGrads& grads) {
  double total = 0.0;
  for (std::size_t idx : indices) {
    total += AccumulateExampleGradient(model, inputs.input(idx), inputs.label(idx),
                                       scale, grads);
  }
  return total;
}

double BatchGradient(const RlrModel& model, const PreparedInputs& inputs,
                     std::span<const std::size_t> indices, double scale,
                     ModelGrads& grads, int threads) {
  const int num_threads = ResolveThreads(threads);
  if (num_threads == 1) {
    return BatchGradientSerial(model, inputs, indices, scale, grads);
  }
  std::vector<ModelGrads> partial(num_threads, ModelGrads(model));
  std::vector<double> partial_loss(num_threads, 0.0);
  std::exception_ptr error;
  const long n = static_cast<long>(indices.size());
#pragma omp parallel num_threads(num_threads)
  {
    const int tid = omp_get_thread_num();
#pragma omp for schedule(static)
    for (long k = 0; k < n; ++k) {
      try {
        const std::size_t idx = indices[k];
        partial_loss[tid] += AccumulateExampleGradient(
            model, inputs.input(idx), inputs.label(idx), scale, partial[tid]);
      } catch (...) {
#pragma omp critical(rlr_gradient_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  double total = 0.0;
  for (int t = 0; t < num_threads; ++t) {
    grads += partial[t];
    total += partial_loss[t];
  }
  return total;
}

}  // namespace rlr
