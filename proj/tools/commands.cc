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

#include "commands.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rlr/batch.h"
#include "rlr/errors.h"
#include "rlr/model_io.h"
#include "rlr/synthetic.h"

namespace rlr::cli {
namespace {

using nlohmann::json;

json ReadJsonFile(const fs::path& path, bool config) {
  std::ifstream in(path);
  if (!in) {
    const std::string msg = "cannot open " + path.string();
    if (config) throw ConfigError(msg);
    throw DataError(msg);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

template <typename T>
T Get(const json& doc, const std::string& field) {
  try {
    return doc.at(field).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field " + field + " has an invalid value: " +
                      doc.at(field).dump());
  }
}

fs::path ResolvePath(const json& doc, const std::string& field, const fs::path& base) {
  const fs::path p = Get<std::string>(doc, field);
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

json MaybeNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string Fixed(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

EvalReport EvaluateOn(const RlrModel& model, const Dataset& data, int threads) {
  const PreparedInputs inputs(model, data);
  const std::vector<double> probs = PredictBatch(model, inputs, threads);
  for (double p : probs) {
    if (!std::isfinite(p)) throw NumericError("non-finite prediction");
  }
  return Evaluate(probs, inputs.labels());
}

std::string DumpJson(const json& doc) { return doc.dump(1) + "\n"; }

}  // namespace

RunConfig RunConfigFromJson(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const kKnown[] = {
      "train",      "val",        "test",         "patterns",   "head",
      "score_mode", "epochs",     "batch_size",   "learning_rate",
      "l2_lambda",  "penalty",    "seed",         "patience",   "beta1",
      "beta2",      "adam_epsilon", "threads",    "deterministic", "output_dir"};
  for (const auto& item : doc.items()) {
    if (std::none_of(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return item.key() == k; })) {
      throw ConfigError("unknown config field " + item.key());
    }
  }
  RunConfig cfg;
  if (!doc.contains("train")) throw ConfigError("config field train is required");
  cfg.train = ResolvePath(doc, "train", base_dir);
  if (doc.contains("val")) cfg.val = ResolvePath(doc, "val", base_dir);
  if (doc.contains("test")) cfg.test = ResolvePath(doc, "test", base_dir);
  if (doc.contains("output_dir")) cfg.output_dir = ResolvePath(doc, "output_dir", base_dir);
  else cfg.output_dir = base_dir;

  if (doc.contains("patterns")) {
    const json& jp = doc.at("patterns");
    if (!jp.is_array() || jp.empty()) {
      throw ConfigError("config field patterns must be a nonempty array");
    }
    cfg.patterns.clear();
    for (std::size_t i = 0; i < jp.size(); ++i) {
      const std::string where = "patterns[" + std::to_string(i) + "]";
      if (!jp[i].is_object()) throw ConfigError("config field " + where + " must be an object");
      for (const auto& item : jp[i].items()) {
        if (item.key() != "count" && item.key() != "states") {
          throw ConfigError("unknown config field " + where + "." + item.key());
        }
      }
      PatternSpec spec;
      if (jp[i].contains("count")) spec.count = Get<std::size_t>(jp[i], "count");
      if (jp[i].contains("states")) spec.states = Get<std::size_t>(jp[i], "states");
      if (spec.count < 1) throw ConfigError("config field " + where + ".count must be >= 1");
      if (spec.states < 2) throw ConfigError("config field " + where + ".states must be >= 2");
      cfg.patterns.push_back(spec);
    }
  }
  if (doc.contains("head")) {
    const json& jh = doc.at("head");
    if (!jh.is_object()) throw ConfigError("config field head must be an object");
    for (const auto& item : jh.items()) {
      if (item.key() != "depth" && item.key() != "hidden") {
        throw ConfigError("unknown config field head." + item.key());
      }
    }
    if (jh.contains("depth")) cfg.head.depth = Get<std::size_t>(jh, "depth");
    if (jh.contains("hidden")) cfg.head.hidden = Get<std::size_t>(jh, "hidden");
    if (cfg.head.depth < 1) throw ConfigError("config field head.depth must be >= 1");
    if (cfg.head.hidden < 1) throw ConfigError("config field head.hidden must be >= 1");
  }
  if (doc.contains("score_mode")) {
    const std::string mode = Get<std::string>(doc, "score_mode");
    try {
      cfg.matching = MatchingFromName(mode);
    } catch (const std::exception&) {
      throw ConfigError("config field score_mode must be whole or subsequence, got " + mode);
    }
  }
  TrainConfig& tc = cfg.train_config;
  if (doc.contains("epochs")) tc.epochs = Get<std::size_t>(doc, "epochs");
  if (doc.contains("batch_size")) tc.batch_size = Get<std::size_t>(doc, "batch_size");
  if (doc.contains("learning_rate")) tc.learning_rate = Get<double>(doc, "learning_rate");
  if (doc.contains("l2_lambda")) tc.l2_lambda = Get<double>(doc, "l2_lambda");
  if (doc.contains("beta1")) tc.beta1 = Get<double>(doc, "beta1");
  if (doc.contains("beta2")) tc.beta2 = Get<double>(doc, "beta2");
  if (doc.contains("adam_epsilon")) tc.adam_epsilon = Get<double>(doc, "adam_epsilon");
  if (doc.contains("patience")) tc.patience = Get<std::size_t>(doc, "patience");
  if (doc.contains("threads")) tc.threads = Get<int>(doc, "threads");
  if (doc.contains("deterministic")) tc.deterministic = Get<bool>(doc, "deterministic");
  if (doc.contains("seed")) {
    tc.seed = Get<std::uint64_t>(doc, "seed");
    cfg.has_seed = true;
  }
  if (doc.contains("penalty")) {
    const std::string penalty = Get<std::string>(doc, "penalty");
    if (penalty == "group") tc.penalty = PenaltyKind::kGroup;
    else if (penalty == "squared") tc.penalty = PenaltyKind::kSquared;
    else throw ConfigError("config field penalty must be group or squared, got " + penalty);
  }
  tc.Validate();
  return cfg;
}

RunConfig LoadRunConfig(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return RunConfigFromJson(ReadJsonFile(path, true), base);
}

std::optional<std::uint64_t> SeedFromEnvironment() {
  const char* raw = std::getenv("RLR_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || raw[0] == '-') {
    throw ConfigError(std::string("RLR_SEED is not a non-negative integer: ") + raw);
  }
  return v;
}

void AtomicOutput::Add(fs::path path, std::string content) {
  files_.emplace_back(std::move(path), std::move(content));
}

void AtomicOutput::Commit() {
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ec;
    for (const fs::path& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files_) {
    fs::path temp = path;
    temp += ".tmp";
    temps.push_back(temp);
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw DataError("cannot write " + path.string());
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files_[i].first, ec);
    if (ec) {
      cleanup();
      throw DataError("cannot move output into place: " + files_[i].first.string());
    }
  }
  files_.clear();
}

void GenSynth(const GenSynthOptions& options) {
  SyntheticSpec spec = SyntheticSpecFromJson(ReadJsonFile(options.spec, true));
  if (options.seed) {
    spec.seed = *options.seed;
  } else if (!ReadJsonFile(options.spec, true).contains("seed")) {
    if (auto env = SeedFromEnvironment()) spec.seed = *env;
  }
  const SyntheticData data = GeneratePlantedMotif(spec);
  const DatasetSplits splits = Split(data.dataset, spec.split, spec.seed);

  auto serialize = [](const Dataset& d) {
    std::ostringstream out;
    WriteDataset(d, out);
    return out.str();
  };
  fs::create_directories(options.out_dir);
  AtomicOutput output;
  output.Add(options.out_dir / "train.jsonl", serialize(splits.train));
  output.Add(options.out_dir / "val.jsonl", serialize(splits.val));
  output.Add(options.out_dir / "test.jsonl", serialize(splits.test));
  output.Add(options.out_dir / "motif.json",
             DumpJson(GroundTruthToJson(spec, data.placements)));
  output.Commit();
}

json EvalReportToJson(const EvalReport& report) {
  return {{"auprc", MaybeNumber(report.auprc)},
          {"auroc", MaybeNumber(report.auroc)},
          {"mean_ll", report.mean_ll},
          {"n_pos", report.n_pos},
          {"n_neg", report.n_neg}};
}

std::string RenderEvalReport(const EvalReport& report) {
  std::ostringstream out;
  out << "AUROC " << Fixed(report.auroc) << "  AUPRC " << Fixed(report.auprc)
      << "  mean log-likelihood " << Fixed(report.mean_ll) << "  ("
      << report.n_pos << " positive, " << report.n_neg << " negative)\n";
  return out.str();
}

json HistoryToJson(const TrainResult& result) {
  json epochs = json::array();
  for (const EpochRecord& r : result.history) {
    epochs.push_back({{"epoch", r.epoch},
                      {"train_loss", r.train_loss},
                      {"val_ll", r.val_ll},
                      {"val_auroc", MaybeNumber(r.val_auroc)},
                      {"val_auprc", MaybeNumber(r.val_auprc)}});
  }
  return {{"kind", result.model.metadata.kind},
          {"best_epoch", result.model.metadata.best_epoch},
          {"epochs", std::move(epochs)}};
}

TrainOutcome RunTrain(const TrainOptions& options) {
  RunConfig cfg = LoadRunConfig(options.config);
  TrainConfig& tc = cfg.train_config;
  if (options.seed) {
    tc.seed = *options.seed;
  } else if (!cfg.has_seed) {
    if (auto env = SeedFromEnvironment()) tc.seed = *env;
  }
  if (options.epochs) tc.epochs = *options.epochs;
  if (options.l2_lambda) tc.l2_lambda = *options.l2_lambda;
  if (options.threads) tc.threads = *options.threads;
  if (options.deterministic) tc.deterministic = true;
  if (tc.deterministic) tc.threads = 1;
  tc.Validate();
  if (options.subsample && !(*options.subsample > 0.0 && *options.subsample <= 1.0)) {
    throw ConfigError("--subsample must be in (0, 1]");
  }

  Dataset train = LoadDataset(cfg.train);
  Dataset val;
  val.feature_dim = train.feature_dim;
  if (!cfg.val.empty()) val = LoadDataset(cfg.val);
  std::optional<Dataset> test;
  if (!cfg.test.empty()) test = LoadDataset(cfg.test);
  if (val.feature_dim != train.feature_dim ||
      (test && test->feature_dim != train.feature_dim)) {
    throw DataError("train, val and test feature_dim differ");
  }
  if (options.subsample) train = Subsample(train, *options.subsample, tc.seed);

  TrainOutcome outcome;
  if (options.baseline) {
    outcome.result = TrainLrBaseline(train, val, tc);
  } else {
    RlrModel model = InitModel(train.feature_dim, cfg.patterns, cfg.head, cfg.matching, tc.seed);
    outcome.result = Train(std::move(model), train, val, tc);
  }
  const RlrModel& model = outcome.result.model;
  outcome.val = EvaluateOn(model, val, tc.threads);
  if (test) outcome.test = EvaluateOn(model, *test, tc.threads);

  outcome.out_dir = options.out_dir ? *options.out_dir : cfg.output_dir;
  fs::create_directories(outcome.out_dir);
  AtomicOutput output;
  output.Add(outcome.out_dir / "model.json", SerializeModel(model));
  output.Add(outcome.out_dir / "history.json", DumpJson(HistoryToJson(outcome.result)));
  output.Add(outcome.out_dir / "val_metrics.json", DumpJson(EvalReportToJson(outcome.val)));
  if (outcome.test) {
    output.Add(outcome.out_dir / "test_metrics.json",
               DumpJson(EvalReportToJson(*outcome.test)));
  }
  output.Commit();

  std::ostringstream summary;
  summary << model.metadata.kind << ": " << outcome.result.history.size()
          << " epochs, best epoch " << model.metadata.best_epoch << "\n"
          << "validation: " << RenderEvalReport(outcome.val);
  if (outcome.test) summary << "test:       " << RenderEvalReport(*outcome.test);
  outcome.summary = summary.str();
  return outcome;
}

EvalReport RunEval(const fs::path& model_path, const fs::path& data_path, int threads) {
  const RlrModel model = LoadModel(model_path);
  const Dataset data = LoadDataset(data_path);
  if (data.feature_dim != model.feature_dim) {
    throw DataError("data feature_dim " + std::to_string(data.feature_dim) +
                    " does not match the model's " + std::to_string(model.feature_dim));
  }
  return EvaluateOn(model, data, threads);
}

ExplainOutput RunExplain(const fs::path& model_path, const fs::path& data_path,
                         std::size_t top_k, const std::optional<std::string>& record_id) {
  const RlrModel model = LoadModel(model_path);
  const Dataset data = LoadDataset(data_path);
  if (data.feature_dim != model.feature_dim) {
    throw DataError("data feature_dim " + std::to_string(data.feature_dim) +
                    " does not match the model's " + std::to_string(model.feature_dim));
  }
  ExplainOutput out;
  out.feature_names = data.feature_names;
  if (record_id) {
    auto it = std::find_if(data.records.begin(), data.records.end(),
                           [&](const SequenceRecord& r) { return r.id == *record_id; });
    if (it == data.records.end()) throw DataError("no record with id " + *record_id);
    out.explanations.push_back(Explain(model, *it, top_k));
    return out;
  }
  out.explanations.resize(data.size());
  const long n = static_cast<long>(data.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) out.explanations[i] = Explain(model, data.records[i], top_k);
  return out;
}

int ReportFailure(const std::exception& e) {
  int code = kExitData;
  const char* kind = "data error";
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) {
    code = kExitUsage;
    kind = "config error";
  } else if (dynamic_cast<const NumericError*>(&e) != nullptr) {
    code = kExitNumeric;
    kind = "numeric failure";
  }
  std::cerr << "rlr: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace rlr::cli
