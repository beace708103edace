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

#ifndef RLR_METRICS_H_
#define RLR_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>

namespace rlr {

// Mann-Whitney AUROC: P(score_pos > score_neg) + 0.5 P(tie). nullopt when
// either class is absent.
std::optional<double> Auroc(std::span<const double> scores,
                            std::span<const int> labels);

// Average precision, sum over positives of the precision at their threshold
// divided by the number of positives. Tied scores share one threshold.
// nullopt without positives.
std::optional<double> Auprc(std::span<const double> scores,
                            std::span<const int> labels);

// Mean log-likelihood with probabilities clamped to [1e-12, 1 - 1e-12].
double MeanLogLikelihood(std::span<const double> probs,
                         std::span<const int> labels);

struct EvalReport {
  std::optional<double> auprc;
  std::optional<double> auroc;
  double mean_ll = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

EvalReport Evaluate(std::span<const double> probs, std::span<const int> labels);

}  // namespace rlr

#endif  // RLR_METRICS_H_
