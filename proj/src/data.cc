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

#include "rlr/data.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "rlr/errors.h"

namespace rlr {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "rlr-sequences";
constexpr int kVersion = 1;

FeatureVector ParseStep(const json& step, std::size_t feature_dim) {
  if (step.is_array()) {
    std::vector<double> values;
    values.reserve(step.size());
    for (const json& v : step) {
      if (!v.is_number()) throw DataError("dense step holds a non-number");
      values.push_back(v.get<double>());
    }
    if (values.size() != feature_dim) {
      throw DataError("dense step has width " + std::to_string(values.size()) +
                      ", expected " + std::to_string(feature_dim));
    }
    return FeatureVector::Dense(std::move(values));
  }
  if (step.is_object()) {
    const std::size_t dim = step.at("dim").get<std::size_t>();
    if (dim != feature_dim) {
      throw DataError("sparse step has dim " + std::to_string(dim) +
                      ", expected " + std::to_string(feature_dim));
    }
    auto indices = step.at("indices").get<std::vector<std::uint32_t>>();
    auto values = step.at("values").get<std::vector<double>>();
    try {
      return FeatureVector::Sparse(dim, std::move(indices), std::move(values));
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
  }
  throw DataError("step must be an array (dense) or object (sparse)");
}

json StepToJson(const FeatureVector& x) {
  if (!x.is_sparse()) return json(std::vector<double>(x.values().begin(), x.values().end()));
  json j = json::object();
  j["dim"] = x.dim();
  j["indices"] = std::vector<std::uint32_t>(x.indices().begin(), x.indices().end());
  j["values"] = std::vector<double>(x.values().begin(), x.values().end());
  return j;
}

void CheckFinite(const FeatureVector& x) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
  }
}

std::vector<std::size_t> SortedPrefix(const std::vector<std::size_t>& shuffled,
                                      std::size_t begin, std::size_t count) {
  std::vector<std::size_t> out(shuffled.begin() + begin,
                               shuffled.begin() + begin + count);
  std::sort(out.begin(), out.end());
  return out;
}

Dataset Gather(const Dataset& source, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  Dataset out;
  out.feature_dim = source.feature_dim;
  out.feature_names = source.feature_names;
  out.records.reserve(indices.size());
  for (std::size_t i : indices) out.records.push_back(source.records[i]);
  return out;
}

}  // namespace

std::size_t Dataset::num_positive() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [](const SequenceRecord& r) { return r.label == 1; }));
}

void Dataset::Validate() const {
  if (!feature_names.empty() && feature_names.size() != feature_dim) {
    throw DataError("feature_names has " + std::to_string(feature_names.size()) +
                    " entries for feature_dim " + std::to_string(feature_dim));
  }
  std::unordered_set<std::string> ids;
  for (const SequenceRecord& r : records) {
    if (r.label != 0 && r.label != 1) {
      throw DataError("record " + r.id + ": label must be 0 or 1");
    }
    if (!ids.insert(r.id).second) throw DataError("duplicate record id " + r.id);
    for (const FeatureVector& x : r.steps) {
      if (x.dim() != feature_dim) {
        throw DataError("record " + r.id + ": step width " +
                        std::to_string(x.dim()) + " != feature_dim " +
                        std::to_string(feature_dim));
      }
    }
  }
}

Dataset ReadDataset(std::istream& in) {
  Dataset dataset;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("format", "") != kFormat) {
          throw DataError("missing header (expected format \"" +
                          std::string(kFormat) + "\")");
        }
        if (j.at("version").get<int>() != kVersion) {
          throw DataError("unsupported version " + j.at("version").dump());
        }
        dataset.feature_dim = j.at("feature_dim").get<std::size_t>();
        if (j.contains("feature_names")) {
          dataset.feature_names = j.at("feature_names").get<std::vector<std::string>>();
          if (dataset.feature_names.size() != dataset.feature_dim) {
            throw DataError("feature_names length differs from feature_dim");
          }
        }
        have_header = true;
        continue;
      }
      SequenceRecord record;
      record.id = j.at("id").get<std::string>();
      record.label = j.at("label").get<int>();
      if (record.label != 0 && record.label != 1) {
        throw DataError("label must be 0 or 1");
      }
      if (!ids.insert(record.id).second) {
        throw DataError("duplicate record id " + record.id);
      }
      for (const json& step : j.at("steps")) {
        record.steps.push_back(ParseStep(step, dataset.feature_dim));
        CheckFinite(record.steps.back());
      }
      dataset.records.push_back(std::move(record));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return dataset;
}

Dataset LoadDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return ReadDataset(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteDataset(const Dataset& dataset, std::ostream& out) {
  json header = {{"format", kFormat},
                 {"version", kVersion},
                 {"feature_dim", dataset.feature_dim}};
  if (!dataset.feature_names.empty()) header["feature_names"] = dataset.feature_names;
  out << header.dump() << '\n';
  for (const SequenceRecord& r : dataset.records) {
    json steps = json::array();
    for (const FeatureVector& x : r.steps) steps.push_back(StepToJson(x));
    json j = {{"id", r.id}, {"label", r.label}, {"steps", std::move(steps)}};
    out << j.dump() << '\n';
  }
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  WriteDataset(dataset, out);
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<std::size_t> Apportion(std::size_t total,
                                   const std::vector<double>& fractions) {
  std::vector<std::size_t> counts(fractions.size());
  std::vector<double> remainders(fractions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainders[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
    if (fractions[order[k]] > 0) {
      ++counts[order[k]];
      ++assigned;
    }
  }
  return counts;
}

DatasetSplits Split(const Dataset& dataset, SplitFractions fractions,
                    std::uint64_t seed) {
  const std::vector<double> f = {fractions.train, fractions.val, fractions.test};
  for (double v : f) {
    if (!(v >= 0.0)) throw std::invalid_argument("split fractions must be >= 0");
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
  const std::size_t nonzero = static_cast<std::size_t>(
      std::count_if(f.begin(), f.end(), [](double v) { return v > 0; }));
  if (dataset.size() < nonzero) {
    throw DataError("fewer records (" + std::to_string(dataset.size()) +
                    ") than splits (" + std::to_string(nonzero) + ")");
  }

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.records[i].label == 1 ? positives : negatives).push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(negatives.begin(), negatives.end(), rng);

  const std::vector<std::size_t> sizes = Apportion(dataset.size(), f);
  std::vector<std::size_t> pos = Apportion(positives.size(), f);
  // Move positives out of any split that cannot hold them.
  for (std::size_t i = 0; i < 3; ++i) {
    while (pos[i] > sizes[i]) {
      for (std::size_t k = 0; k < 3; ++k) {
        if (pos[k] < sizes[k]) {
          --pos[i];
          ++pos[k];
          break;
        }
      }
    }
  }

  std::array<std::vector<std::size_t>, 3> members;
  std::size_t pos_begin = 0;
  std::size_t neg_begin = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t neg = sizes[i] - pos[i];
    members[i] = SortedPrefix(positives, pos_begin, pos[i]);
    const auto negs = SortedPrefix(negatives, neg_begin, neg);
    members[i].insert(members[i].end(), negs.begin(), negs.end());
    pos_begin += pos[i];
    neg_begin += neg;
  }
  return {Gather(dataset, members[0]), Gather(dataset, members[1]),
          Gather(dataset, members[2])};
}

Dataset Subsample(const Dataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample fraction must be in (0, 1]");
  }
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.records[i].label == 1 ? positives : negatives).push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(negatives.begin(), negatives.end(), rng);
  const auto keep = [fraction](std::size_t count) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
  };
  std::vector<std::size_t> chosen(positives.begin(),
                                  positives.begin() + keep(positives.size()));
  chosen.insert(chosen.end(), negatives.begin(),
                negatives.begin() + keep(negatives.size()));
  return Gather(dataset, std::move(chosen));
}

}  // namespace rlr
