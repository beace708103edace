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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "rlr/semiring.h"

namespace rlr {
namespace {

const Semiring kAll[] = {Semiring::PlusTimes(), Semiring::MaxProduct(), Semiring::MaxPlus(),
                         Semiring::MinPlus(), Semiring::MinProduct()};

// Reassociating a floating-point + or * can move the last bit.
bool Near(const Semiring&, double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

TEST_CASE("semiring axioms hold on random samples") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (const Semiring& s : kAll) {
    CAPTURE(s.name());
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      CHECK(Near(s, s.plus(s.plus(a, b), c), s.plus(a, s.plus(b, c))));
      CHECK(Near(s, s.times(s.times(a, b), c), s.times(a, s.times(b, c))));
      CHECK(s.plus(a, b) == s.plus(b, a));
      CHECK(Near(s, s.times(a, s.plus(b, c)), s.plus(s.times(a, b), s.times(a, c))));
      CHECK(s.plus(a, s.zero()) == a);
      CHECK(s.times(a, s.one()) == a);
      CHECK(s.times(a, s.zero()) == s.zero());
    }
  }
}

TEST_CASE("names round-trip") {
  for (const Semiring& s : kAll) CHECK(SemiringFromName(s.name()).kind == s.kind);
  CHECK_THROWS(SemiringFromName("log"));
}

TEST_CASE("max-product vector-matrix product") {
  const Semiring s = Semiring::MaxProduct();
  const BandMatrix m({0.4, 0.3}, {0.9});
  const WeightVector v = VecMat(std::vector<double>{0.5, 0.2}, m, s);
  CHECK(v[0] == doctest::Approx(0.20).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("band product ignores off-band garbage in the dense source") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> dense = {0.1, 0.2, nan,   //
                                     nan, 0.3, 0.4,   //
                                     nan, nan, 0.5};
  const BandMatrix m = BandMatrix::FromDenseBand(dense, 3);
  const WeightVector v = VecMat(std::vector<double>{1.0, 1.0, 1.0}, m, Semiring::MaxProduct());
  for (double x : v) CHECK_FALSE(std::isnan(x));
  CHECK(v[2] == 0.5);
}

TEST_CASE("band product agrees with the dense product") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Semiring& s : {Semiring::PlusTimes(), Semiring::MaxProduct(), Semiring::MaxPlus()}) {
    for (std::size_t d = 1; d <= 6; ++d) {
      std::vector<double> diag(d), super(d - 1), v(d);
      for (double& x : diag) x = u(rng);
      for (double& x : super) x = u(rng);
      for (double& x : v) x = u(rng);
      const BandMatrix m(diag, super);
      const WeightVector a = VecMat(v, m, s);
      const WeightVector b = VecMatDense(v, m.ToDense(s), d, s);
      for (std::size_t j = 0; j < d; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-14));
    }
  }
}

TEST_CASE("asteration approximation adds the identity") {
  const Semiring s = Semiring::MaxProduct();
  const BandMatrix eps({0.0, 0.0, 0.0}, {0.7, 0.2});
  const BandMatrix closed = AsterateApprox(eps, s);
  CHECK(closed.diagonal(0) == 1.0);
  CHECK(closed.superdiagonal(0) == 0.7);
  const WeightVector h = VecMat(OneHot(3, 0, s), closed, s);
  CHECK(h == WeightVector{1.0, 0.7, 0.0});  // one hop per application
}

TEST_CASE("dot and one-hot") {
  const Semiring s = Semiring::MaxPlus();
  CHECK(Dot(std::vector<double>{1, 5}, std::vector<double>{2, -1}, s) == 4.0);
  CHECK(OneHot(3, 1, s) == WeightVector{-Semiring::kInf, 0.0, -Semiring::kInf});
}

}  // namespace
}  // namespace rlr
