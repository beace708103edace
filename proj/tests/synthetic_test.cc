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

#include "doctest.h"
#include "oracles.h"
#include "rlr/errors.h"
#include "rlr/synthetic.h"

namespace rlr {
namespace {

SyntheticSpec Small() {
  SyntheticSpec spec;
  spec.num_records = 300;
  spec.seed = 5;
  return spec;
}

TEST_CASE("labels agree with an independent motif scanner") {
  const SyntheticSpec spec = Small();
  const SyntheticData data = GeneratePlantedMotif(spec);
  for (const SequenceRecord& r : data.dataset.records) {
    CAPTURE(r.id);
    CHECK(oracle::ScanMotif(r.steps, spec.motif, spec.max_gap) == (r.label == 1));
    CHECK(ContainsMotif(r.steps, spec.motif, spec.max_gap) == (r.label == 1));
  }
}

TEST_CASE("positive count is round(rate * n)") {
  SyntheticSpec spec = Small();
  spec.num_records = 1000;
  spec.positive_rate = 0.2;
  CHECK(GeneratePlantedMotif(spec).dataset.num_positive() == 200);
}

TEST_CASE("negatives carry the same spikes in another order") {
  const SyntheticSpec spec = Small();
  const SyntheticData data = GeneratePlantedMotif(spec);
  for (const MotifPlacement& p : data.placements) {
    CHECK(p.events.size() == spec.motif.size());
    if (p.label == 1) {
      for (std::size_t i = 0; i < p.events.size(); ++i) {
        CHECK(p.events[i].feature == spec.motif[i].feature);
        if (i > 0) {
          CHECK(p.events[i].time > p.events[i - 1].time);
          CHECK(p.events[i].time - p.events[i - 1].time <= spec.max_gap);
        }
      }
    }
  }
}

TEST_CASE("single-event motif separates by presence only") {
  SyntheticSpec spec = Small();
  spec.motif = {{4, 1.5}};
  const SyntheticData data = GeneratePlantedMotif(spec);
  for (std::size_t i = 0; i < data.placements.size(); ++i) {
    CHECK(data.placements[i].events.size() == std::size_t(data.placements[i].label));
    CHECK(oracle::ScanMotif(data.dataset.records[i].steps, spec.motif, spec.max_gap) ==
          (data.placements[i].label == 1));
  }
}

TEST_CASE("generation is seed-deterministic") {
  CHECK(GeneratePlantedMotif(Small()).dataset == GeneratePlantedMotif(Small()).dataset);
  SyntheticSpec other = Small();
  other.seed = 6;
  CHECK_FALSE(GeneratePlantedMotif(other).dataset == GeneratePlantedMotif(Small()).dataset);
}

TEST_CASE("invalid specs are rejected") {
  SyntheticSpec spec = Small();
  spec.min_length = 2;
  spec.max_length = 2;
  CHECK_THROWS_AS(GeneratePlantedMotif(spec), ConfigError);
  spec = Small();
  spec.motif[0].feature = 20;
  CHECK_THROWS_AS(spec.Validate(), ConfigError);
  spec = Small();
  spec.positive_rate = 1.0;
  CHECK_THROWS_AS(spec.Validate(), ConfigError);
  CHECK_THROWS_AS(SyntheticSpecFromJson({{"feature_dims", 3}}), ConfigError);
}

TEST_CASE("spec JSON round trip") {
  const SyntheticSpec spec = Small();
  const SyntheticSpec back = SyntheticSpecFromJson(SyntheticSpecToJson(spec));
  CHECK(back.num_records == spec.num_records);
  CHECK(back.motif.size() == 3);
  CHECK(back.motif[2].feature == 12);
}

TEST_CASE("scanner respects the gap bound") {
  const std::vector<MotifEvent> motif = {{0, 0.5}, {1, 0.5}};
  auto step = [](double a, double b) { return FeatureVector::Dense({a, b}); };
  const Sequence near = {step(1, 0), step(0, 0), step(0, 1)};
  const Sequence far = {step(1, 0), step(0, 0), step(0, 0), step(0, 1)};
  CHECK(ContainsMotif(near, motif, 2));
  CHECK_FALSE(ContainsMotif(far, motif, 2));
  CHECK(oracle::ScanMotif(near, motif, 2));
  CHECK_FALSE(oracle::ScanMotif(far, motif, 2));
}

}  // namespace
}  // namespace rlr
