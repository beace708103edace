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

#ifndef RLR_TOOLS_COMMANDS_H_
#define RLR_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rlr/data.h"
#include "rlr/interpret.h"
#include "rlr/metrics.h"
#include "rlr/model.h"
#include "rlr/train.h"

namespace rlr::cli {

namespace fs = std::filesystem;

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
  fs::path train;
  fs::path val;   // empty: no validation set
  fs::path test;  // empty: no test report
  std::vector<PatternSpec> patterns = {{2, 4}, {2, 3}};
  HeadSpec head;
  Matching matching = Matching::kSubsequence;
  TrainConfig train_config;
  bool has_seed = false;  // seed given in the file
  fs::path output_dir = ".";
};

// Relative paths resolve against `base_dir`. Unknown or ill-typed fields
// throw ConfigError naming the field.
RunConfig RunConfigFromJson(const nlohmann::json& doc, const fs::path& base_dir);
RunConfig LoadRunConfig(const fs::path& path);

// Seed from RLR_SEED, if set and parseable.
std::optional<std::uint64_t> SeedFromEnvironment();

// Writes every file to a temporary sibling first and renames only after all
// writes succeeded, so a failure leaves no partial output behind.
class AtomicOutput {
 public:
  void Add(fs::path path, std::string content);
  void Commit();

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

struct GenSynthOptions {
  fs::path spec;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
};
// train.jsonl, val.jsonl, test.jsonl and motif.json under out_dir.
void GenSynth(const GenSynthOptions& options);

struct TrainOptions {
  fs::path config;
  bool baseline = false;
  std::optional<double> subsample;
  std::optional<int> threads;
  bool deterministic = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<double> l2_lambda;
  std::optional<fs::path> out_dir;
  bool pretty = false;
};

struct TrainOutcome {
  TrainResult result;
  EvalReport val;
  std::optional<EvalReport> test;
  fs::path out_dir;
  std::string summary;  // human-readable, for --pretty
};

// model.json, history.json and val_metrics.json (plus test_metrics.json
// when the config names a test set) under the output directory.
TrainOutcome RunTrain(const TrainOptions& options);

nlohmann::json EvalReportToJson(const EvalReport& report);
nlohmann::json HistoryToJson(const TrainResult& result);
std::string RenderEvalReport(const EvalReport& report);

EvalReport RunEval(const fs::path& model_path, const fs::path& data_path,
                   int threads);

struct ExplainOutput {
  std::vector<Explanation> explanations;
  std::vector<std::string> feature_names;
};
// top_k == 0 explains every pattern. A record_id absent from the data is a
// DataError.
ExplainOutput RunExplain(const fs::path& model_path, const fs::path& data_path,
                         std::size_t top_k,
                         const std::optional<std::string>& record_id);

// Maps a library exception to an exit code and prints it to stderr.
int ReportFailure(const std::exception& e);

}  // namespace rlr::cli

#endif  // RLR_TOOLS_COMMANDS_H_
