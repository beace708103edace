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

#include "rlr/interpret.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rlr {
namespace {

using nlohmann::json;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> LeaveOneOutDeltas(const RlrModel& model,
                                      std::span<const FeatureVector> input) {
  std::vector<double> log_scores = PatternLogScores(model, input);
  const double full = PredictFromLogScores(model, log_scores);
  std::vector<double> deltas(log_scores.size());
  for (std::size_t i = 0; i < log_scores.size(); ++i) {
    const double saved = log_scores[i];
    log_scores[i] = kNegInf;
    deltas[i] = std::abs(full - PredictFromLogScores(model, log_scores));
    log_scores[i] = saved;
  }
  return deltas;
}

std::vector<PatternImportance> Rank(const std::vector<double>& deltas) {
  std::vector<PatternImportance> out(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) out[i] = {i, deltas[i], 0};
  std::stable_sort(out.begin(), out.end(),
                   [](const PatternImportance& a, const PatternImportance& b) {
                     return a.delta > b.delta;
                   });
  for (std::size_t r = 0; r < out.size(); ++r) out[r].rank = r;
  return out;
}

std::string FeatureLabel(std::size_t index, const std::vector<std::string>& names) {
  if (index < names.size()) return names[index];
  return "f" + std::to_string(index);
}

std::string Fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

json Maybe(const std::optional<std::size_t>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::vector<PatternImportance> PatternImportanceFor(
    const RlrModel& model, std::span<const FeatureVector> seq) {
  const Sequence input = TransformInput(model, seq);
  return Rank(LeaveOneOutDeltas(model, input));
}

std::vector<PatternImportance> PopulationImportance(const RlrModel& model,
                                                    const Dataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("population importance of an empty dataset");
  const std::size_t k = model.patterns.size();
  const long n = static_cast<long>(dataset.size());
  std::vector<std::vector<double>> per_record(dataset.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long r = 0; r < n; ++r) {
    const Sequence input = TransformInput(model, dataset.records[r].steps);
    per_record[r] = LeaveOneOutDeltas(model, input);
  }
  std::vector<double> mean(k, 0.0);
  for (const auto& deltas : per_record) {
    for (std::size_t i = 0; i < k; ++i) mean[i] += deltas[i];
  }
  for (double& v : mean) v /= static_cast<double>(dataset.size());
  return Rank(mean);
}

std::optional<TransitionAttribution> AttributeTransition(
    const PatternParams& p, const FeatureVector& x, StepKind kind,
    std::size_t state) {
  if (kind != StepKind::kSelfLoop && kind != StepKind::kMain) return std::nullopt;
  if (x.dim() != p.input_dim) {
    throw std::invalid_argument("attribution: input width mismatch");
  }
  std::span<const double> weights;
  TransitionAttribution out;
  if (kind == StepKind::kSelfLoop) {
    if (state >= p.num_states) throw std::invalid_argument("attribution: bad state");
    weights = p.self_loop_row(state);
    out.bias = p.self_loop_bias[state];
  } else {
    if (state + 1 >= p.num_states) throw std::invalid_argument("attribution: bad state");
    weights = p.main_row(state);
    out.bias = p.main_bias[state];
  }
  x.ForEachNonzero([&](std::size_t j, double v) {
    const double c = weights[j] * v;
    if (c != 0.0) out.sorted.push_back({j, c});
    out.feature_total += c;
  });
  out.logit = out.feature_total + out.bias;

  const double sign = out.feature_total > 0 ? 1.0 : -1.0;
  std::stable_sort(out.sorted.begin(), out.sorted.end(),
                   [sign](const FeatureContribution& a, const FeatureContribution& b) {
                     return sign * a.contribution > sign * b.contribution;
                   });
  if (out.feature_total == 0.0) return out;

  const double target = kAttributionCoverage * std::abs(out.feature_total);
  double cumulative = 0.0;
  for (const FeatureContribution& c : out.sorted) {
    cumulative += sign * c.contribution;
    ++out.prefix_length;
    if (cumulative >= target) break;
  }
  out.coverage = sign * cumulative / std::abs(out.feature_total);
  return out;
}

MatchWindow WindowOf(const PathTrace& trace) {
  MatchWindow window;
  if (trace.steps.empty()) return window;
  const std::size_t final_state = trace.steps.back().to_state;
  std::optional<std::size_t> last_consumed;
  for (const PathStep& step : trace.steps) {
    if (step.kind == StepKind::kRestart) {
      window.start = *step.time;
      continue;
    }
    if (step.time) last_consumed = step.time;
    if (step.to_state == final_state && step.from_state != final_state) {
      window.end = last_consumed;
      break;
    }
  }
  return window;
}

Explanation Explain(const RlrModel& model, const SequenceRecord& record,
                    std::size_t top_k) {
  const Sequence input = TransformInput(model, record.steps);
  const std::vector<double> log_scores = PatternLogScores(model, input);
  Explanation out;
  out.record_id = record.id;
  out.prediction = PredictFromLogScores(model, log_scores);
  const std::vector<PatternImportance> ranked = Rank(LeaveOneOutDeltas(model, input));
  const std::size_t count = top_k == 0 ? ranked.size() : std::min(top_k, ranked.size());
  const ScoreMode mode{model.matching, Domain::kLog};
  for (std::size_t r = 0; r < count; ++r) {
    const PatternParams& p = model.patterns[ranked[r].pattern_index];
    PatternExplanation pe;
    pe.importance = ranked[r];
    pe.num_states = p.num_states;
    pe.score = std::exp(log_scores[ranked[r].pattern_index]);
    pe.total_log_score = log_scores[ranked[r].pattern_index];
    const std::optional<PathTrace> trace = DecodeBestPath(p, input, mode);
    if (trace) {
      pe.matched = true;
      pe.window = WindowOf(*trace);
      for (const PathStep& step : trace->steps) {
        StepExplanation se{step, std::nullopt};
        if (step.time && (step.kind == StepKind::kMain || step.kind == StepKind::kSelfLoop)) {
          se.attribution = AttributeTransition(p, input[*step.time], step.kind, step.from_state);
        }
        pe.steps.push_back(std::move(se));
      }
    }
    out.patterns.push_back(std::move(pe));
  }
  return out;
}

json ExplanationToJson(const Explanation& explanation,
                       const std::vector<std::string>& feature_names) {
  json patterns = json::array();
  for (const PatternExplanation& pe : explanation.patterns) {
    json steps = json::array();
    for (const StepExplanation& se : pe.steps) {
      json js = {{"kind", StepKindName(se.step.kind)},
                 {"time", Maybe(se.step.time)},
                 {"from", se.step.from_state},
                 {"to", se.step.to_state},
                 {"log_weight", se.step.log_weight}};
      if (se.attribution) {
        const TransitionAttribution& a = *se.attribution;
        json features = json::array();
        for (const FeatureContribution& c : a.prefix()) {
          features.push_back({{"index", c.feature},
                              {"name", FeatureLabel(c.feature, feature_names)},
                              {"contribution", c.contribution}});
        }
        js["logit"] = a.logit;
        js["bias"] = a.bias;
        js["feature_total"] = a.feature_total;
        js["coverage"] = a.coverage;
        js["features"] = std::move(features);
      }
      steps.push_back(std::move(js));
    }
    json window = nullptr;
    if (pe.window) window = {{"start", pe.window->start}, {"end", Maybe(pe.window->end)}};
    patterns.push_back({{"pattern_index", pe.importance.pattern_index},
                        {"rank", pe.importance.rank},
                        {"delta", pe.importance.delta},
                        {"num_states", pe.num_states},
                        {"score", pe.score},
                        {"matched", pe.matched},
                        {"window", std::move(window)},
                        {"steps", std::move(steps)}});
  }
  return {{"record_id", explanation.record_id},
          {"prediction", explanation.prediction},
          {"patterns", std::move(patterns)}};
}

std::string RenderExplanation(const Explanation& explanation,
                              const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  out << "record " << explanation.record_id << ": prediction "
      << Fixed(explanation.prediction) << "\n";
  for (const PatternExplanation& pe : explanation.patterns) {
    out << "  #" << pe.importance.rank + 1 << " pattern " << pe.importance.pattern_index
        << " (" << pe.num_states << " states), delta " << Fixed(pe.importance.delta)
        << ", score " << Fixed(pe.score, 4);
    if (!pe.matched) {
      out << ": no match\n";
      continue;
    }
    if (pe.window) {
      out << ": activated at time " << pe.window->start;
      if (pe.window->end) out << ", final state reached at time " << *pe.window->end;
    }
    out << "\n";
    for (const StepExplanation& se : pe.steps) {
      const PathStep& s = se.step;
      switch (s.kind) {
        case StepKind::kRestart:
          continue;
        case StepKind::kEpsilon:
          out << "    moves from state " << s.from_state << " to " << s.to_state
              << " by an epsilon transition\n";
          continue;
        case StepKind::kSelfLoop:
          out << "    t=" << *s.time << " stays at state " << s.from_state;
          break;
        case StepKind::kMain:
          out << "    t=" << *s.time << " moves from state " << s.from_state << " to "
              << s.to_state;
          break;
      }
      if (se.attribution && se.attribution->prefix_length > 0) {
        out << " because of";
        bool first = true;
        for (const FeatureContribution& c : se.attribution->prefix()) {
          out << (first ? " " : ", ") << FeatureLabel(c.feature, feature_names) << " ("
              << (c.contribution >= 0 ? "+" : "") << Fixed(c.contribution) << ")";
          first = false;
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace rlr
