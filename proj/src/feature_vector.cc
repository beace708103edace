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

#include "rlr/feature_vector.h"

#include <stdexcept>
#include <string>

namespace rlr {

FeatureVector FeatureVector::Dense(std::vector<double> values) {
  FeatureVector v;
  v.dim_ = values.size();
  v.sparse_ = false;
  v.values_ = std::move(values);
  return v;
}

FeatureVector FeatureVector::Sparse(std::size_t dim,
                                    std::vector<std::uint32_t> indices,
                                    std::vector<double> values) {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("sparse vector: " +
                                std::to_string(indices.size()) +
                                " indices but " + std::to_string(values.size()) +
                                " values");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= dim) {
      throw std::invalid_argument("sparse vector: index " +
                                  std::to_string(indices[k]) +
                                  " out of range for dim " + std::to_string(dim));
    }
    if (k > 0 && indices[k] <= indices[k - 1]) {
      throw std::invalid_argument(
          "sparse vector: indices must be strictly increasing");
    }
  }
  FeatureVector v;
  v.dim_ = dim;
  v.sparse_ = true;
  v.indices_ = std::move(indices);
  v.values_ = std::move(values);
  return v;
}

double FeatureVector::at(std::size_t j) const {
  if (j >= dim_) throw std::out_of_range("feature index out of range");
  if (!sparse_) return values_[j];
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] == j) return values_[k];
    if (indices_[k] > j) break;
  }
  return 0.0;
}

double FeatureVector::dot(std::span<const double> weights) const {
  if (weights.size() != dim_) {
    throw std::invalid_argument("dot: weight length " +
                                std::to_string(weights.size()) +
                                " != feature dim " + std::to_string(dim_));
  }
  double acc = 0.0;
  if (sparse_) {
    for (std::size_t k = 0; k < indices_.size(); ++k) {
      acc += weights[indices_[k]] * values_[k];
    }
  } else {
    for (std::size_t j = 0; j < dim_; ++j) acc += weights[j] * values_[j];
  }
  return acc;
}

void FeatureVector::AddScaledTo(double scale, std::span<double> weights) const {
  ForEachNonzero([&](std::size_t j, double x) { weights[j] += scale * x; });
}

std::vector<double> FeatureVector::ToDense() const {
  if (!sparse_) return values_;
  std::vector<double> dense(dim_, 0.0);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    dense[indices_[k]] = values_[k];
  }
  return dense;
}

}  // namespace rlr
