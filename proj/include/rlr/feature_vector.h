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

#ifndef RLR_FEATURE_VECTOR_H_
#define RLR_FEATURE_VECTOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rlr {

// One time step of a multivariate sequence. Stored either densely or as
// strictly increasing (index, value) pairs; the encoding is preserved so
// datasets round-trip exactly.
class FeatureVector {
 public:
  FeatureVector() = default;

  static FeatureVector Dense(std::vector<double> values);
  // Throws std::invalid_argument unless indices are strictly increasing and
  // below `dim`, and sizes agree.
  static FeatureVector Sparse(std::size_t dim,
                              std::vector<std::uint32_t> indices,
                              std::vector<double> values);

  std::size_t dim() const { return dim_; }
  bool is_sparse() const { return sparse_; }

  // Stored entries: all of them for dense vectors.
  std::size_t stored_size() const { return values_.size(); }
  std::span<const std::uint32_t> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }

  double at(std::size_t j) const;
  double dot(std::span<const double> weights) const;

  // Calls f(index, value) for every stored entry with a nonzero value.
  template <typename F>
  void ForEachNonzero(F&& f) const {
    if (sparse_) {
      for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] != 0.0) f(static_cast<std::size_t>(indices_[k]), values_[k]);
      }
    } else {
      for (std::size_t j = 0; j < values_.size(); ++j) {
        if (values_[j] != 0.0) f(j, values_[j]);
      }
    }
  }

  // weights += scale * x, touching only nonzero coordinates.
  void AddScaledTo(double scale, std::span<double> weights) const;

  std::vector<double> ToDense() const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::size_t dim_ = 0;
  bool sparse_ = false;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

using Sequence = std::vector<FeatureVector>;

}  // namespace rlr

#endif  // RLR_FEATURE_VECTOR_H_
