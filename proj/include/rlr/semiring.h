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

#ifndef RLR_SEMIRING_H_
#define RLR_SEMIRING_H_

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace rlr {

enum class SemiringKind {
  kPlusTimes,
  kMaxProduct,
  kMaxPlus,
  kMinPlus,
  kMinProduct,
};

// A (plus, zero, times, one) algebra over doubles. The set of semirings is
// closed so the scoring loops can be specialized on `kind`.
struct Semiring {
  SemiringKind kind = SemiringKind::kMaxProduct;

  static constexpr Semiring PlusTimes() { return {SemiringKind::kPlusTimes}; }
  static constexpr Semiring MaxProduct() { return {SemiringKind::kMaxProduct}; }
  static constexpr Semiring MaxPlus() { return {SemiringKind::kMaxPlus}; }
  static constexpr Semiring MinPlus() { return {SemiringKind::kMinPlus}; }
  static constexpr Semiring MinProduct() { return {SemiringKind::kMinProduct}; }

  constexpr double plus(double x, double y) const {
    switch (kind) {
      case SemiringKind::kPlusTimes:
        return x + y;
      case SemiringKind::kMaxProduct:
      case SemiringKind::kMaxPlus:
        return x < y ? y : x;
      case SemiringKind::kMinPlus:
      case SemiringKind::kMinProduct:
        return y < x ? y : x;
    }
    return x + y;
  }

  constexpr double times(double x, double y) const {
    switch (kind) {
      case SemiringKind::kPlusTimes:
      case SemiringKind::kMaxProduct:
        return x * y;
      case SemiringKind::kMinProduct:
        // inf is the additive identity; keep it absorbing under times.
        if (x == kInf || y == kInf) return kInf;
        return x * y;
      case SemiringKind::kMaxPlus:
      case SemiringKind::kMinPlus:
        return x + y;
    }
    return x * y;
  }

  constexpr double zero() const {
    switch (kind) {
      case SemiringKind::kPlusTimes:
      case SemiringKind::kMaxProduct:
        return 0.0;
      case SemiringKind::kMaxPlus:
        return -kInf;
      case SemiringKind::kMinPlus:
      case SemiringKind::kMinProduct:
        return kInf;
    }
    return 0.0;
  }

  constexpr double one() const {
    switch (kind) {
      case SemiringKind::kMaxPlus:
      case SemiringKind::kMinPlus:
        return 0.0;
      default:
        return 1.0;
    }
  }

  std::string_view name() const;

  static constexpr double kInf = std::numeric_limits<double>::infinity();
};

// Parses "plus-times", "max-product", "max-plus", "min-plus", "min-product".
Semiring SemiringFromName(std::string_view name);

// A d x d matrix whose only structurally nonzero entries are the diagonal
// and the first superdiagonal. Everything else is the semiring zero.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(std::size_t dim, const Semiring& semiring);
  BandMatrix(std::vector<double> diagonal, std::vector<double> superdiagonal);

  // Copies the band out of a dense row-major dim x dim matrix. Off-band
  // entries are never read.
  static BandMatrix FromDenseBand(std::span<const double> dense,
                                  std::size_t dim);

  std::size_t dim() const { return diagonal_.size(); }
  double diagonal(std::size_t i) const { return diagonal_[i]; }
  double superdiagonal(std::size_t i) const { return superdiagonal_[i]; }
  double& diagonal(std::size_t i) { return diagonal_[i]; }
  double& superdiagonal(std::size_t i) { return superdiagonal_[i]; }

  // Entry (i, j), with the semiring zero outside the band.
  double at(std::size_t i, std::size_t j, const Semiring& semiring) const;
  std::vector<double> ToDense(const Semiring& semiring) const;

 private:
  std::vector<double> diagonal_;
  std::vector<double> superdiagonal_;
};

using WeightVector = std::vector<double>;

// result_j = plus_i (v_i times M_ij). O(d) over the band.
WeightVector VecMat(std::span<const double> v, const BandMatrix& m,
                    const Semiring& semiring);

// Same product over an arbitrary dense row-major matrix; O(d^2).
WeightVector VecMatDense(std::span<const double> v,
                         std::span<const double> dense, std::size_t dim,
                         const Semiring& semiring);

// I plus M elementwise: the one-step truncation of the asteration series.
BandMatrix AsterateApprox(const BandMatrix& m, const Semiring& semiring);

// plus_i (v_i times w_i).
double Dot(std::span<const double> v, std::span<const double> w,
           const Semiring& semiring);

// One-hot vector: semiring one at `index`, zero elsewhere.
WeightVector OneHot(std::size_t dim, std::size_t index,
                    const Semiring& semiring);

}  // namespace rlr

#endif  // RLR_SEMIRING_H_
