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

#include <cstdlib>
#include <fstream>

#include "commands.h"
#include "doctest.h"
#include "rlr/errors.h"

namespace rlr::cli {
namespace {

using nlohmann::json;

std::string ErrorOf(const json& doc) {
  try {
    RunConfigFromJson(doc, "/base");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("config fields are parsed and paths resolved") {
  const RunConfig cfg = RunConfigFromJson(
      {{"train", "data/train.jsonl"}, {"val", "/abs/val.jsonl"},
       {"patterns", {{{"count", 3}, {"states", 5}}}}, {"head", {{"depth", 2}}},
       {"score_mode", "whole"}, {"epochs", 4}, {"penalty", "squared"}, {"seed", 9}},
      "/base");
  CHECK(cfg.train == fs::path("/base/data/train.jsonl"));
  CHECK(cfg.val == fs::path("/abs/val.jsonl"));
  CHECK(cfg.patterns.size() == 1);
  CHECK(cfg.patterns[0].states == 5);
  CHECK(cfg.head.depth == 2);
  CHECK(cfg.matching == Matching::kWhole);
  CHECK(cfg.train_config.penalty == PenaltyKind::kSquared);
  CHECK(cfg.has_seed);
}

TEST_CASE("invalid fields are named") {
  CHECK(ErrorOf({{"train", "t"}, {"epoch", 3}}).find("epoch") != std::string::npos);
  CHECK(ErrorOf({{"train", "t"}, {"learning_rate", "fast"}}).find("learning_rate") !=
        std::string::npos);
  CHECK(ErrorOf({{"train", "t"}, {"patterns", {{{"count", 1}, {"states", 1}}}}})
            .find("patterns[0].states") != std::string::npos);
  CHECK(ErrorOf({{"train", "t"}, {"score_mode", "prefix"}}).find("score_mode") !=
        std::string::npos);
  CHECK(ErrorOf({{"val", "v"}}).find("train") != std::string::npos);
}

TEST_CASE("RLR_SEED is a fallback") {
  ::setenv("RLR_SEED", "1234", 1);
  CHECK(SeedFromEnvironment() == std::optional<std::uint64_t>(1234));
  ::setenv("RLR_SEED", "abc", 1);
  CHECK_THROWS_AS(SeedFromEnvironment(), ConfigError);
  ::unsetenv("RLR_SEED");
  CHECK_FALSE(SeedFromEnvironment().has_value());
}

TEST_CASE("atomic output writes all files or none") {
  const fs::path dir = fs::temp_directory_path() / "rlr_atomic_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  AtomicOutput ok;
  ok.Add(dir / "a.txt", "alpha");
  ok.Add(dir / "b.txt", "beta");
  ok.Commit();
  CHECK(fs::exists(dir / "a.txt"));
  CHECK(fs::exists(dir / "b.txt"));

  AtomicOutput bad;
  bad.Add(dir / "c.txt", "gamma");
  bad.Add(dir / "missing" / "d.txt", "delta");
  CHECK_THROWS_AS(bad.Commit(), DataError);
  CHECK_FALSE(fs::exists(dir / "c.txt"));
  CHECK_FALSE(fs::exists(dir / "c.txt.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("exit codes follow the error kind") {
  CHECK(ReportFailure(ConfigError("x")) == kExitUsage);
  CHECK(ReportFailure(DataError("x")) == kExitData);
  CHECK(ReportFailure(NumericError("x")) == kExitNumeric);
}

}  // namespace
}  // namespace rlr::cli
