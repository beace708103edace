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

#include <limits>

#include "doctest.h"
#include "rlr/errors.h"
#include "rlr/model_io.h"

namespace rlr {
namespace {

TEST_CASE("save then load is bit-exact") {
  const std::vector<PatternSpec> specs = {{2, 4}, {1, 2}};
  RlrModel model = InitModel(3, specs, {2, 5}, Matching::kWhole, 77);
  model.patterns[1].epsilon_bias[0] = -std::numeric_limits<double>::infinity();
  model.patterns[0].main_weights[0] = 0.1 + 0.2;
  model.metadata.best_val_ll = -0.123456789012345;
  const RlrModel back = DeserializeModel(SerializeModel(model));
  CHECK(back == model);
  CHECK(SerializeModel(back) == SerializeModel(model));
}

TEST_CASE("baseline models round-trip with their transform") {
  RlrModel model = MakeLrEquivalent(std::vector<double>(8, 0.25), 0.5);
  model.feature_dim = 2;
  model.transform = FeatureTransform::kFlatten;
  CHECK(DeserializeModel(SerializeModel(model)) == model);
}

TEST_CASE("malformed documents are data errors") {
  CHECK_THROWS_AS(DeserializeModel("{"), DataError);
  CHECK_THROWS_AS(DeserializeModel("{\"format\":\"other\"}"), DataError);
  const std::vector<PatternSpec> specs = {{1, 3}};
  nlohmann::json doc = ModelToJson(InitModel(2, specs, {}, Matching::kWhole, 1));
  doc["patterns"][0]["main_bias"] = {1.0};
  CHECK_THROWS_AS(ModelFromJson(doc), DataError);
}

}  // namespace
}  // namespace rlr
