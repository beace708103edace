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

#ifndef RLR_DATA_H_
#define RLR_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rlr/feature_vector.h"

namespace rlr {

struct SequenceRecord {
  std::string id;
  Sequence steps;
  int label = 0;  // 0 or 1

  bool operator==(const SequenceRecord&) const = default;
};

struct Dataset {
  std::size_t feature_dim = 0;
  std::vector<std::string> feature_names;  // empty or feature_dim long
  std::vector<SequenceRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  std::size_t num_positive() const;
  // Throws DataError on non-uniform widths, duplicate ids or bad labels.
  void Validate() const;

  bool operator==(const Dataset&) const = default;
};

// Line-delimited JSON. The first line is a header
//   {"format":"rlr-sequences","version":1,"feature_dim":m,"feature_names":[...]}
// followed by one record per line
//   {"id":"r1","label":1,"steps":[[dense row], {"dim":m,"indices":[..],"values":[..]}]}
// An empty file is an empty dataset. Errors name the offending line.
Dataset ReadDataset(std::istream& in);
Dataset LoadDataset(const std::filesystem::path& path);
void WriteDataset(const Dataset& dataset, std::ostream& out);
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct DatasetSplits {
  Dataset train;
  Dataset val;
  Dataset test;
};

// Seeded, label-stratified partition. Split sizes are floor(f * n) with the
// remainder handed out by largest fractional part (ties to the earlier
// split); positives are apportioned the same way. Records keep their
// relative input order inside each split.
DatasetSplits Split(const Dataset& dataset, SplitFractions fractions,
                    std::uint64_t seed);

// Seeded stratified subsample keeping round(fraction * count) of each class.
Dataset Subsample(const Dataset& dataset, double fraction, std::uint64_t seed);

// floor-then-distribute apportionment of `total` by `fractions`.
std::vector<std::size_t> Apportion(std::size_t total,
                                   const std::vector<double>& fractions);

}  // namespace rlr

#endif  // RLR_DATA_H_
