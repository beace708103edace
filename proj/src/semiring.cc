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

#include "rlr/semiring.h"

#include <stdexcept>
#include <string>

namespace rlr {

std::string_view Semiring::name() const {
  switch (kind) {
    case SemiringKind::kPlusTimes:
      return "plus-times";
    case SemiringKind::kMaxProduct:
      return "max-product";
    case SemiringKind::kMaxPlus:
      return "max-plus";
    case SemiringKind::kMinPlus:
      return "min-plus";
    case SemiringKind::kMinProduct:
      return "min-product";
  }
  return "unknown";
}

Semiring SemiringFromName(std::string_view name) {
  if (name == "plus-times") return Semiring::PlusTimes();
  if (name == "max-product") return Semiring::MaxProduct();
  if (name == "max-plus") return Semiring::MaxPlus();
  if (name == "min-plus") return Semiring::MinPlus();
  if (name == "min-product") return Semiring::MinProduct();
  throw std::invalid_argument("unknown semiring: " + std::string(name));
}

BandMatrix::BandMatrix(std::size_t dim, const Semiring& semiring)
    : diagonal_(dim, semiring.zero()),
      superdiagonal_(dim == 0 ? 0 : dim - 1, semiring.zero()) {}

BandMatrix::BandMatrix(std::vector<double> diagonal,
                       std::vector<double> superdiagonal)
    : diagonal_(std::move(diagonal)), superdiagonal_(std::move(superdiagonal)) {
  if (diagonal_.empty() || superdiagonal_.size() + 1 != diagonal_.size()) {
    throw std::invalid_argument(
        "band matrix: superdiagonal must have exactly dim - 1 entries");
  }
}

BandMatrix BandMatrix::FromDenseBand(std::span<const double> dense,
                                     std::size_t dim) {
  if (dim == 0 || dense.size() != dim * dim) {
    throw std::invalid_argument("band matrix: dense input is not dim x dim");
  }
  std::vector<double> diagonal(dim);
  std::vector<double> superdiagonal(dim - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    diagonal[i] = dense[i * dim + i];
    if (i + 1 < dim) superdiagonal[i] = dense[i * dim + i + 1];
  }
  return BandMatrix(std::move(diagonal), std::move(superdiagonal));
}

double BandMatrix::at(std::size_t i, std::size_t j,
                      const Semiring& semiring) const {
  if (i >= dim() || j >= dim()) {
    throw std::out_of_range("band matrix index out of range");
  }
  if (i == j) return diagonal_[i];
  if (j == i + 1) return superdiagonal_[i];
  return semiring.zero();
}

std::vector<double> BandMatrix::ToDense(const Semiring& semiring) const {
  const std::size_t d = dim();
  std::vector<double> dense(d * d, semiring.zero());
  for (std::size_t i = 0; i < d; ++i) {
    dense[i * d + i] = diagonal_[i];
    if (i + 1 < d) dense[i * d + i + 1] = superdiagonal_[i];
  }
  return dense;
}

WeightVector VecMat(std::span<const double> v, const BandMatrix& m,
                    const Semiring& semiring) {
  if (v.size() != m.dim()) {
    throw std::invalid_argument("vec_mat: vector length " +
                                std::to_string(v.size()) +
                                " does not match matrix dim " +
                                std::to_string(m.dim()));
  }
  WeightVector out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    double acc = semiring.times(v[j], m.diagonal(j));
    if (j > 0) {
      acc = semiring.plus(acc, semiring.times(v[j - 1], m.superdiagonal(j - 1)));
    }
    out[j] = acc;
  }
  return out;
}

WeightVector VecMatDense(std::span<const double> v,
                         std::span<const double> dense, std::size_t dim,
                         const Semiring& semiring) {
  if (v.size() != dim || dense.size() != dim * dim) {
    throw std::invalid_argument("vec_mat_dense: dimension mismatch");
  }
  WeightVector out(dim, semiring.zero());
  for (std::size_t j = 0; j < dim; ++j) {
    double acc = semiring.zero();
    for (std::size_t i = 0; i < dim; ++i) {
      acc = semiring.plus(acc, semiring.times(v[i], dense[i * dim + j]));
    }
    out[j] = acc;
  }
  return out;
}

BandMatrix AsterateApprox(const BandMatrix& m, const Semiring& semiring) {
  BandMatrix out = m;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    out.diagonal(i) = semiring.plus(semiring.one(), m.diagonal(i));
  }
  return out;
}

double Dot(std::span<const double> v, std::span<const double> w,
           const Semiring& semiring) {
  if (v.size() != w.size()) {
    throw std::invalid_argument("dot: length mismatch");
  }
  double acc = semiring.zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc = semiring.plus(acc, semiring.times(v[i], w[i]));
  }
  return acc;
}

WeightVector OneHot(std::size_t dim, std::size_t index,
                    const Semiring& semiring) {
  if (index >= dim) throw std::invalid_argument("one-hot index out of range");
  WeightVector v(dim, semiring.zero());
  v[index] = semiring.one();
  return v;
}

}  // namespace rlr
