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

#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "rlr/data.h"
#include "rlr/errors.h"

namespace rlr {
namespace {

Dataset Toy(std::size_t n, std::size_t positives) {
  Dataset d;
  d.feature_dim = 2;
  for (std::size_t i = 0; i < n; ++i) {
    d.records.push_back({"r" + std::to_string(i),
                         {FeatureVector::Dense({double(i), 0.5})},
                         i < positives ? 1 : 0});
  }
  return d;
}

TEST_CASE("save then load reproduces dense and sparse records") {
  Dataset d;
  d.feature_dim = 4;
  d.feature_names = {"a", "b", "c", "d"};
  d.records.push_back({"x", {FeatureVector::Dense({0.1, 1e-300, -3.25, 1.0 / 3.0}),
                             FeatureVector::Sparse(4, {2}, {1.5})}, 1});
  d.records.push_back({"y", {}, 0});
  std::stringstream buf;
  WriteDataset(d, buf);
  const Dataset back = ReadDataset(buf);
  CHECK(back == d);
  CHECK(back.records[0].steps[1].ToDense() == std::vector<double>{0, 0, 1.5, 0});
}

TEST_CASE("empty input is an empty dataset") {
  std::stringstream empty;
  CHECK(ReadDataset(empty).empty());
}

TEST_CASE("errors name the line") {
  std::stringstream bad(
      "{\"format\":\"rlr-sequences\",\"version\":1,\"feature_dim\":2}\n"
      "{\"id\":\"a\",\"label\":1,\"steps\":[[1,2]]}\n"
      "{\"id\":\"b\",\"label\":1,\"steps\":[[1,2,3]]}\n");
  try {
    ReadDataset(bad);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::stringstream dup(
      "{\"format\":\"rlr-sequences\",\"version\":1,\"feature_dim\":1}\n"
      "{\"id\":\"a\",\"label\":1,\"steps\":[[1]]}\n"
      "{\"id\":\"a\",\"label\":0,\"steps\":[[1]]}\n");
  CHECK_THROWS_AS(ReadDataset(dup), DataError);
}

TEST_CASE("split sizes floor then distribute") {
  const DatasetSplits s = Split(Toy(10, 0), {0.8, 0.1, 0.1}, 1);
  CHECK(s.train.size() == 8);
  CHECK(s.val.size() == 1);
  CHECK(s.test.size() == 1);
  const DatasetSplits all = Split(Toy(10, 3), {1.0, 0.0, 0.0}, 1);
  CHECK(all.train.size() == 10);
  CHECK(all.val.empty());
  CHECK(Apportion(3000, {2.0 / 3, 1.0 / 6, 1.0 / 6}) == std::vector<std::size_t>{2000, 500, 500});
}

TEST_CASE("splits are disjoint, exhaustive, stratified and seeded") {
  const Dataset d = Toy(103, 31);
  const DatasetSplits s = Split(d, {0.7, 0.15, 0.15}, 9);
  std::multiset<std::string> ids;
  for (const Dataset* part : {&s.train, &s.val, &s.test}) {
    for (const auto& r : part->records) ids.insert(r.id);
    const double expected = 31.0 / 103.0 * part->size();
    CHECK(std::abs(double(part->num_positive()) - expected) <= 1.0);
  }
  CHECK(ids.size() == 103);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 103);
  const DatasetSplits again = Split(d, {0.7, 0.15, 0.15}, 9);
  CHECK(again.train == s.train);
  CHECK_THROWS_AS(Split(Toy(2, 1), {0.4, 0.3, 0.3}, 1), DataError);
}

TEST_CASE("subsample keeps class proportions") {
  const Dataset d = Toy(200, 40);
  CHECK(Subsample(d, 1.0, 3) == d);
  const Dataset s = Subsample(d, 0.25, 3);
  CHECK(s.num_positive() == 10);
  CHECK(s.size() == 50);
  CHECK(Subsample(d, 0.25, 3) == s);
}

}  // namespace
}  // namespace rlr
