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

#ifndef RLR_SYNTHETIC_H_
#define RLR_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rlr/data.h"

namespace rlr {

// One motif event: the feature spikes strictly above `threshold`.
struct MotifEvent {
  std::size_t feature = 0;
  double threshold = 0.0;
};

struct SyntheticSpec {
  std::size_t feature_dim = 20;
  std::size_t num_records = 3000;
  double positive_rate = 0.3;
  std::vector<MotifEvent> motif = {{3, 1.5}, {7, 1.5}, {12, 1.5}};
  std::size_t max_gap = 5;  // max time difference between consecutive events
  std::size_t min_length = 10;
  std::size_t max_length = 30;
  double noise_mean = 0.0;
  double noise_std = 0.5;
  double spike_offset = 1.0;  // spikes are threshold + offset + |N(0, std)|
  std::uint64_t seed = 0;
  SplitFractions split = {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

// Parses a spec document; absent fields keep their defaults, unknown fields
// are rejected.
SyntheticSpec SyntheticSpecFromJson(const nlohmann::json& doc);
nlohmann::json SyntheticSpecToJson(const SyntheticSpec& spec);

struct PlantedEvent {
  std::size_t time = 0;
  std::size_t feature = 0;
};

// Where spikes were planted in one record. Positives list the motif events
// in motif order; negatives list their (reordered or truncated) events in
// time order.
struct MotifPlacement {
  std::string id;
  int label = 0;
  std::vector<PlantedEvent> events;
};

struct SyntheticData {
  Dataset dataset;
  std::vector<MotifPlacement> placements;  // parallel to dataset.records
};

// Positives carry the whole motif in order with gaps in [1, max_gap];
// negatives carry the same spikes in a non-motif order (or a strict prefix
// of the motif when no reordering avoids it), so feature-wise summary
// statistics cannot separate the classes. Exactly round(rate * n) records
// are positive. Seed-deterministic.
SyntheticData GeneratePlantedMotif(const SyntheticSpec& spec);

// True when the motif occurs in order with every consecutive gap in
// [1, max_gap]. Dynamic program over (time, motif position).
bool ContainsMotif(std::span<const FeatureVector> seq,
                   std::span<const MotifEvent> motif, std::size_t max_gap);

nlohmann::json GroundTruthToJson(const SyntheticSpec& spec,
                                 const std::vector<MotifPlacement>& placements);

}  // namespace rlr

#endif  // RLR_SYNTHETIC_H_
