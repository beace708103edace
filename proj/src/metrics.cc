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

#include "rlr/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rlr {
namespace {

void CheckSizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("scores and labels differ in length");
}

// Indices sorted by descending score; ties keep input order.
std::vector<std::size_t> RankDescending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

std::optional<double> Auroc(std::span<const double> scores,
                            std::span<const int> labels) {
  CheckSizes(scores.size(), labels.size());
  auto order = RankDescending(scores);
  std::reverse(order.begin(), order.end());
  // Ascending sweep: every positive beats the negatives strictly below its
  // score and half-beats the negatives tied with it.
  double n_pos = 0;
  double neg_below = 0;
  double wins = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    double group_pos = 0;
    double group_neg = 0;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) {
      (labels[order[end]] == 1 ? group_pos : group_neg) += 1;
      ++end;
    }
    wins += group_pos * (neg_below + 0.5 * group_neg);
    neg_below += group_neg;
    n_pos += group_pos;
    start = end;
  }
  if (n_pos == 0 || neg_below == 0) return std::nullopt;
  return wins / (n_pos * neg_below);
}

std::optional<double> Auprc(std::span<const double> scores,
                            std::span<const int> labels) {
  CheckSizes(scores.size(), labels.size());
  const auto order = RankDescending(scores);
  const double n_pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  if (n_pos == 0) return std::nullopt;
  double tp = 0;
  double fp = 0;
  double ap = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    double group_pos = 0;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) {
      if (labels[order[end]] == 1) {
        group_pos += 1;
      } else {
        fp += 1;
      }
      ++end;
    }
    tp += group_pos;
    if (group_pos > 0) ap += group_pos * (tp / (tp + fp));
    start = end;
  }
  return ap / n_pos;
}

double MeanLogLikelihood(std::span<const double> probs,
                         std::span<const int> labels) {
  CheckSizes(probs.size(), labels.size());
  if (probs.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], 1e-12, 1.0 - 1e-12);
    total += labels[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<double>(probs.size());
}

EvalReport Evaluate(std::span<const double> probs, std::span<const int> labels) {
  EvalReport report;
  report.auroc = Auroc(probs, labels);
  report.auprc = Auprc(probs, labels);
  report.mean_ll = MeanLogLikelihood(probs, labels);
  report.n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  report.n_neg = labels.size() - report.n_pos;
  return report;
}

}  // namespace rlr
