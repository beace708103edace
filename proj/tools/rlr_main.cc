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

// Command-line front end: gen-synth, train, eval, explain.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "rlr/errors.h"

namespace {

using rlr::cli::fs::path;

// Flags parsed into plain values; optionals are filled only when given.
struct Flags {
  std::string spec, config, model, data, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> subsample, l2_lambda;
  std::optional<std::size_t> epochs;
  std::optional<std::string> record_id;
  std::size_t top_k = 3;
  bool baseline = false;
  bool deterministic = false;
  bool pretty = false;
};

void Emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  rlr::cli::AtomicOutput output;
  output.Add(out, text);
  output.Commit();
}

int RunGenSynth(const Flags& f) {
  rlr::cli::GenSynth({f.spec, f.out, f.seed});
  if (f.pretty) std::cout << "wrote train/val/test splits and motif.json to " << f.out << "\n";
  return rlr::cli::kExitOk;
}

int RunTrain(const Flags& f) {
  rlr::cli::TrainOptions options;
  options.config = f.config;
  options.baseline = f.baseline;
  options.subsample = f.subsample;
  options.threads = f.threads;
  options.deterministic = f.deterministic;
  options.seed = f.seed;
  options.epochs = f.epochs;
  options.l2_lambda = f.l2_lambda;
  if (!f.out.empty()) options.out_dir = path(f.out);
  const rlr::cli::TrainOutcome outcome = rlr::cli::RunTrain(options);
  if (f.pretty) {
    std::cout << outcome.summary;
  } else {
    std::cout << rlr::cli::EvalReportToJson(outcome.val).dump() << "\n";
  }
  return rlr::cli::kExitOk;
}

int RunEval(const Flags& f) {
  const int threads = f.deterministic ? 1 : f.threads.value_or(0);
  const rlr::EvalReport report = rlr::cli::RunEval(f.model, f.data, threads);
  Emit(f.pretty ? rlr::cli::RenderEvalReport(report)
                : rlr::cli::EvalReportToJson(report).dump() + "\n",
       f.out);
  return rlr::cli::kExitOk;
}

int RunExplain(const Flags& f) {
  const rlr::cli::ExplainOutput result =
      rlr::cli::RunExplain(f.model, f.data, f.top_k, f.record_id);
  std::ostringstream text;
  for (const rlr::Explanation& e : result.explanations) {
    if (f.pretty) {
      text << rlr::RenderExplanation(e, result.feature_names);
    } else {
      text << rlr::ExplanationToJson(e, result.feature_names).dump() << "\n";
    }
  }
  Emit(text.str(), f.out);
  return rlr::cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational logistic regression over event sequences"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen-synth", "Generate the planted-motif benchmark");
  gen->add_option("--spec", f.spec, "Synthetic spec (JSON)")->required();
  gen->add_option("--out", f.out, "Output directory")->required();
  gen->add_option("--seed", f.seed, "Overrides the spec seed");
  gen->add_flag("--pretty", f.pretty, "Print a short summary");

  auto* train = app.add_subcommand("train", "Train a model from a run config");
  train->add_option("--config", f.config, "Run config (JSON)")->required();
  train->add_flag("--baseline", f.baseline, "Train the flattened LR baseline instead");
  train->add_option("--subsample", f.subsample, "Keep this fraction of each training class");
  train->add_option("--threads", f.threads, "Worker threads (0: runtime default)");
  train->add_flag("--deterministic", f.deterministic, "Single-threaded, reproducible run");
  train->add_option("--seed", f.seed, "Overrides the config seed");
  train->add_option("--epochs", f.epochs, "Overrides the config epochs");
  train->add_option("--l2-lambda", f.l2_lambda, "Overrides the config l2_lambda");
  train->add_option("--out", f.out, "Output directory (overrides output_dir)");
  train->add_flag("--pretty", f.pretty, "Human-readable summary");

  auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval->add_option("--model", f.model, "Model file")->required();
  eval->add_option("--data", f.data, "Dataset (JSONL)")->required();
  eval->add_option("--threads", f.threads, "Worker threads (0: runtime default)");
  eval->add_flag("--deterministic", f.deterministic, "Single-threaded");
  eval->add_option("--out", f.out, "Write the report here instead of stdout");
  eval->add_flag("--pretty", f.pretty, "Human-readable report");

  auto* explain = app.add_subcommand("explain", "Explain predictions");
  explain->add_option("--model", f.model, "Model file")->required();
  explain->add_option("--data", f.data, "Dataset (JSONL)")->required();
  explain->add_option("--top-k", f.top_k, "Patterns per record (0: all)");
  explain->add_option("--record-id", f.record_id, "Explain only this record");
  explain->add_option("--out", f.out, "Write explanations here instead of stdout");
  explain->add_flag("--pretty", f.pretty, "Narrative text instead of JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rlr::cli::kExitOk : rlr::cli::kExitUsage;
  }

  try {
    if (*gen) return RunGenSynth(f);
    if (*train) return RunTrain(f);
    if (*eval) return RunEval(f);
    return RunExplain(f);
  } catch (const std::exception& e) {
    return rlr::cli::ReportFailure(e);
  }
}
