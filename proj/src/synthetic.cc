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

#include "rlr/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "rlr/errors.h"

namespace rlr {
namespace {

using nlohmann::json;

struct Placed {
  std::size_t motif_index;  // which motif event this spike stands for
  std::size_t time;
};

// Consecutive times with gaps in [1, max_gap] that fit inside `length`.
std::vector<std::size_t> PlaceTimes(std::size_t count, std::size_t length,
                                    std::size_t max_gap, std::mt19937_64& rng) {
  std::vector<std::size_t> gaps(count == 0 ? 0 : count - 1, 1);
  std::uniform_int_distribution<std::size_t> gap_dist(1, max_gap);
  for (int attempt = 0; attempt < 50; ++attempt) {
    for (std::size_t& g : gaps) g = gap_dist(rng);
    if (std::accumulate(gaps.begin(), gaps.end(), std::size_t{1}) <= length) break;
    std::fill(gaps.begin(), gaps.end(), 1);  // fallback if every attempt fails
  }
  const std::size_t span = std::accumulate(gaps.begin(), gaps.end(), std::size_t{1});
  std::uniform_int_distribution<std::size_t> start_dist(0, length - span);
  std::vector<std::size_t> times(count);
  if (count == 0) return times;
  times[0] = start_dist(rng);
  for (std::size_t i = 1; i < count; ++i) times[i] = times[i - 1] + gaps[i - 1];
  return times;
}

Sequence Render(const SyntheticSpec& spec, std::size_t length,
                const std::vector<Placed>& spikes, std::mt19937_64& rng) {
  // Motif features stay strictly below their smallest threshold unless spiked.
  std::map<std::size_t, double> caps;
  for (const MotifEvent& e : spec.motif) {
    auto [it, inserted] = caps.emplace(e.feature, e.threshold);
    if (!inserted) it->second = std::min(it->second, e.threshold);
  }
  std::normal_distribution<double> noise(spec.noise_mean, spec.noise_std);
  std::vector<std::vector<double>> rows(length, std::vector<double>(spec.feature_dim));
  for (auto& row : rows) {
    for (std::size_t j = 0; j < spec.feature_dim; ++j) {
      double v = noise(rng);
      if (auto it = caps.find(j); it != caps.end()) {
        while (v >= it->second) v = noise(rng);
      }
      row[j] = v;
    }
  }
  std::normal_distribution<double> jitter(0.0, spec.noise_std);
  for (const Placed& s : spikes) {
    const MotifEvent& e = spec.motif[s.motif_index];
    rows[s.time][e.feature] = e.threshold + spec.spike_offset + std::abs(jitter(rng));
  }
  Sequence seq;
  seq.reserve(length);
  for (auto& row : rows) seq.push_back(FeatureVector::Dense(std::move(row)));
  return seq;
}

std::vector<PlantedEvent> EventsOf(const SyntheticSpec& spec, std::vector<Placed> spikes,
                                   bool motif_order) {
  if (!motif_order) {
    std::sort(spikes.begin(), spikes.end(),
              [](const Placed& a, const Placed& b) { return a.time < b.time; });
  }
  std::vector<PlantedEvent> out;
  for (const Placed& s : spikes) out.push_back({s.time, spec.motif[s.motif_index].feature});
  return out;
}

template <typename T>
T Field(const json& doc, const char* name, T fallback) {
  if (!doc.contains(name)) return fallback;
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("spec field ") + name + " has the wrong type");
  }
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (feature_dim == 0) throw ConfigError("feature_dim must be >= 1");
  if (num_records == 0) throw ConfigError("num_records must be >= 1");
  if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
    throw ConfigError("positive_rate must be in (0, 1)");
  }
  if (motif.empty()) throw ConfigError("motif must have at least one event");
  for (const MotifEvent& e : motif) {
    if (e.feature >= feature_dim) throw ConfigError("motif feature index >= feature_dim");
    if (!(e.threshold > noise_mean)) {
      throw ConfigError("motif threshold must exceed noise_mean");
    }
  }
  if (max_gap == 0) throw ConfigError("max_gap must be >= 1");
  if (min_length > max_length) throw ConfigError("min_length must be <= max_length");
  if (min_length < motif.size()) {
    throw ConfigError("min_length " + std::to_string(min_length) +
                      " is too short to fit a motif of length " +
                      std::to_string(motif.size()));
  }
  if (!(noise_std > 0.0)) throw ConfigError("noise_std must be > 0");
  if (!(spike_offset >= 0.0)) throw ConfigError("spike_offset must be >= 0");
  const double sum = split.train + split.val + split.test;
  if (split.train < 0 || split.val < 0 || split.test < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be non-negative and sum to 1");
  }
}

SyntheticSpec SyntheticSpecFromJson(const json& doc) {
  if (!doc.is_object()) throw ConfigError("synthetic spec must be a JSON object");
  static const char* const kKnown[] = {
      "feature_dim", "num_records", "positive_rate", "motif",       "max_gap",
      "min_length",  "max_length",  "noise_mean",    "noise_std",   "spike_offset",
      "seed",        "split"};
  for (const auto& item : doc.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) {
          return item.key() == k;
        }) == std::end(kKnown)) {
      throw ConfigError("unknown spec field " + item.key());
    }
  }
  SyntheticSpec spec;
  spec.feature_dim = Field(doc, "feature_dim", spec.feature_dim);
  spec.num_records = Field(doc, "num_records", spec.num_records);
  spec.positive_rate = Field(doc, "positive_rate", spec.positive_rate);
  spec.max_gap = Field(doc, "max_gap", spec.max_gap);
  spec.min_length = Field(doc, "min_length", spec.min_length);
  spec.max_length = Field(doc, "max_length", spec.max_length);
  spec.noise_mean = Field(doc, "noise_mean", spec.noise_mean);
  spec.noise_std = Field(doc, "noise_std", spec.noise_std);
  spec.spike_offset = Field(doc, "spike_offset", spec.spike_offset);
  spec.seed = Field(doc, "seed", spec.seed);
  if (doc.contains("motif")) {
    const json& jm = doc.at("motif");
    if (!jm.is_array()) throw ConfigError("spec field motif must be an array");
    spec.motif.clear();
    for (const json& e : jm) {
      if (!e.is_object() || !e.contains("feature") || !e.contains("threshold")) {
        throw ConfigError("spec field motif entries need feature and threshold");
      }
      spec.motif.push_back({Field(e, "feature", std::size_t{0}),
                            Field(e, "threshold", 0.0)});
    }
  }
  if (doc.contains("split")) {
    const auto f = Field(doc, "split", std::vector<double>{});
    if (f.size() != 3) throw ConfigError("spec field split must have three entries");
    spec.split = {f[0], f[1], f[2]};
  }
  spec.Validate();
  return spec;
}

json SyntheticSpecToJson(const SyntheticSpec& spec) {
  json motif = json::array();
  for (const MotifEvent& e : spec.motif) {
    motif.push_back({{"feature", e.feature}, {"threshold", e.threshold}});
  }
  return {{"feature_dim", spec.feature_dim},
          {"num_records", spec.num_records},
          {"positive_rate", spec.positive_rate},
          {"motif", std::move(motif)},
          {"max_gap", spec.max_gap},
          {"min_length", spec.min_length},
          {"max_length", spec.max_length},
          {"noise_mean", spec.noise_mean},
          {"noise_std", spec.noise_std},
          {"spike_offset", spec.spike_offset},
          {"seed", spec.seed},
          {"split", {spec.split.train, spec.split.val, spec.split.test}}};
}

bool ContainsMotif(std::span<const FeatureVector> seq, std::span<const MotifEvent> motif,
                   std::size_t max_gap) {
  if (motif.empty()) return true;
  const std::size_t n = seq.size();
  const std::size_t k = motif.size();
  // ends[t]: a match of motif[0..i] ends exactly at time t.
  std::vector<char> ends(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    ends[t] = seq[t].at(motif[0].feature) > motif[0].threshold;
  }
  for (std::size_t i = 1; i < k; ++i) {
    std::vector<char> next(n, 0);
    for (std::size_t t = 1; t < n; ++t) {
      if (!(seq[t].at(motif[i].feature) > motif[i].threshold)) continue;
      const std::size_t lo = t > max_gap ? t - max_gap : 0;
      for (std::size_t s = lo; s < t && !next[t]; ++s) next[t] = ends[s];
    }
    ends.swap(next);
  }
  return std::find(ends.begin(), ends.end(), 1) != ends.end();
}

SyntheticData GeneratePlantedMotif(const SyntheticSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = spec.num_records;
  const std::size_t k = spec.motif.size();
  const auto num_pos = static_cast<std::size_t>(
      std::llround(spec.positive_rate * static_cast<double>(n)));
  std::vector<int> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + num_pos, 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  SyntheticData out;
  out.dataset.feature_dim = spec.feature_dim;
  for (std::size_t j = 0; j < spec.feature_dim; ++j) {
    out.dataset.feature_names.push_back("f" + std::to_string(j));
  }
  std::uniform_int_distribution<std::size_t> length_dist(spec.min_length, spec.max_length);
  const int width = static_cast<int>(std::to_string(n).size());

  for (std::size_t r = 0; r < n; ++r) {
    char id[32];
    std::snprintf(id, sizeof(id), "r%0*zu", width, r);
    const std::size_t length = length_dist(rng);
    std::vector<Placed> spikes;
    Sequence seq;
    if (labels[r] == 1) {
      const std::vector<std::size_t> times = PlaceTimes(k, length, spec.max_gap, rng);
      for (std::size_t i = 0; i < k; ++i) spikes.push_back({i, times[i]});
      seq = Render(spec, length, spikes, rng);
    } else if (k == 1) {
      seq = Render(spec, length, spikes, rng);
    } else {
      bool done = false;
      std::vector<std::size_t> order(k);
      for (int attempt = 0; attempt < 100 && !done; ++attempt) {
        std::iota(order.begin(), order.end(), 0);
        do {
          std::shuffle(order.begin(), order.end(), rng);
        } while (std::is_sorted(order.begin(), order.end()));
        const std::vector<std::size_t> times = PlaceTimes(k, length, spec.max_gap, rng);
        spikes.clear();
        for (std::size_t i = 0; i < k; ++i) spikes.push_back({order[i], times[i]});
        seq = Render(spec, length, spikes, rng);
        done = !ContainsMotif(seq, spec.motif, spec.max_gap);
      }
      if (!done) {
        // Repeated features can make every reordering spell the motif.
        const std::vector<std::size_t> times = PlaceTimes(k - 1, length, spec.max_gap, rng);
        spikes.clear();
        for (std::size_t i = 0; i + 1 < k; ++i) spikes.push_back({i, times[i]});
        seq = Render(spec, length, spikes, rng);
      }
    }
    out.placements.push_back({id, labels[r], EventsOf(spec, spikes, labels[r] == 1)});
    out.dataset.records.push_back({id, std::move(seq), labels[r]});
  }
  return out;
}

json GroundTruthToJson(const SyntheticSpec& spec,
                       const std::vector<MotifPlacement>& placements) {
  json records = json::array();
  for (const MotifPlacement& p : placements) {
    json events = json::array();
    for (const PlantedEvent& e : p.events) {
      events.push_back({{"time", e.time}, {"feature", e.feature}});
    }
    records.push_back({{"id", p.id}, {"label", p.label}, {"events", std::move(events)}});
  }
  return {{"format", "rlr-motif"},
          {"version", 1},
          {"spec", SyntheticSpecToJson(spec)},
          {"records", std::move(records)}};
}

}  // namespace rlr
