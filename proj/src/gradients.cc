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

#include "rlr/gradients.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "forward_log.h"

namespace rlr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void PatternGrads::SetZero() {
  ForEachTensor([](std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
}

PatternGrads& PatternGrads::operator+=(const PatternGrads& other) {
  if (!SameShape(other)) throw std::invalid_argument("gradient shape mismatch");
  auto add = [](std::vector<double>& dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  };
  add(self_loop_weights, other.self_loop_weights);
  add(self_loop_bias, other.self_loop_bias);
  add(main_weights, other.main_weights);
  add(main_bias, other.main_bias);
  add(epsilon_bias, other.epsilon_bias);
  return *this;
}

PatternGrads& PatternGrads::operator*=(double scale) {
  ForEachTensor([scale](std::span<double> t) {
    for (double& v : t) v *= scale;
  });
  return *this;
}

std::pair<double, Tape> ScoreWithTape(const PatternParams& p,
                                      std::span<const FeatureVector> seq,
                                      Matching matching) {
  Tape tape;
  const double log_score = internal::ForwardLog(p, seq, matching, &tape);
  return {log_score, std::move(tape)};
}

TracedPath TraceBestPath(const Tape& tape, const PatternParams& p) {
  const std::size_t d = tape.num_states;
  const std::size_t n = tape.length;
  if (d != p.num_states || tape.values.size() != (n + 1) * d) {
    throw std::invalid_argument("tape does not match pattern");
  }
  TracedPath out;
  out.min_margin = kInf;
  const double final_value = tape.value(n, d - 1);
  out.trace.total_log_score = final_value;
  if (final_value == kNegInf) return out;

  const bool subsequence = tape.matching == Matching::kSubsequence;
  std::vector<PathStep> reversed;
  auto note = [&out](double margin) { out.min_margin = std::min(out.min_margin, margin); };

  // Path start: the initial vector, possibly preceded by a restart at
  // `time` and followed by a single epsilon hop out of state 0.
  auto emit_start = [&](std::size_t state, std::size_t time) {
    note(tape.epsilon_margin[state]);
    if (tape.took_epsilon[state]) {
      reversed.push_back({std::nullopt, StepKind::kEpsilon, state - 1, state,
                          LogSigmoid(p.epsilon_bias[state - 1])});
      --state;
    }
    if (state != 0) throw std::logic_error("trace did not reach the start state");
    if (subsequence) reversed.push_back({time, StepKind::kRestart, 0, 0, 0.0});
  };

  std::size_t j = d - 1;
  bool started = false;
  for (std::size_t s = n; s >= 1 && !started; --s) {
    const std::size_t k = s * d + j;
    if (subsequence) {
      note(tape.restart_margin[k]);
      if (tape.took_restart[k]) {
        emit_start(j, s);
        started = true;
        break;
      }
    }
    note(tape.epsilon_margin[k]);
    if (tape.took_epsilon[k]) {
      reversed.push_back({std::nullopt, StepKind::kEpsilon, j - 1, j,
                          LogSigmoid(p.epsilon_bias[j - 1])});
      --j;
    }
    const std::size_t c = (s - 1) * d + j;
    note(tape.symbol_margin[c]);
    switch (tape.symbol_choice[c]) {
      case SymbolChoice::kMain:
        reversed.push_back(
            {s - 1, StepKind::kMain, j - 1, j,
             LogSigmoid(tape.main_logits[(s - 1) * (d - 1) + j - 1])});
        --j;
        break;
      case SymbolChoice::kSelfLoop:
        reversed.push_back({s - 1, StepKind::kSelfLoop, j, j,
                            LogSigmoid(tape.self_logits[c])});
        break;
      case SymbolChoice::kUnreachable:
        throw std::logic_error("trace entered an unreachable state");
    }
  }
  if (!started) emit_start(j, 0);

  out.trace.steps.assign(reversed.rbegin(), reversed.rend());
  out.matched = true;
  return out;
}

void BackwardAccumulate(const PatternParams& p,
                        std::span<const FeatureVector> seq, const Tape& tape,
                        double upstream, PatternGrads& grads) {
  if (tape.num_states != p.num_states || tape.length != seq.size()) {
    throw std::invalid_argument("tape does not match pattern or sequence");
  }
  if (!grads.SameShape(p)) throw std::invalid_argument("gradient shape mismatch");
  const TracedPath traced = TraceBestPath(tape, p);
  if (!traced.matched) return;
  const std::size_t d = p.num_states;
  for (const PathStep& step : traced.trace.steps) {
    switch (step.kind) {
      case StepKind::kMain: {
        const std::size_t t = *step.time;
        const std::size_t i = step.from_state;
        const double g = upstream * Sigmoid(-tape.main_logits[t * (d - 1) + i]);
        seq[t].AddScaledTo(g, grads.main_row(i));
        grads.main_bias[i] += g;
        break;
      }
      case StepKind::kSelfLoop: {
        const std::size_t t = *step.time;
        const std::size_t i = step.from_state;
        const double g = upstream * Sigmoid(-tape.self_logits[t * d + i]);
        seq[t].AddScaledTo(g, grads.self_loop_row(i));
        grads.self_loop_bias[i] += g;
        break;
      }
      case StepKind::kEpsilon: {
        const std::size_t i = step.from_state;
        grads.epsilon_bias[i] += upstream * Sigmoid(-p.epsilon_bias[i]);
        break;
      }
      case StepKind::kRestart:
        break;
    }
  }
}

PatternGrads Backward(const PatternParams& p,
                      std::span<const FeatureVector> seq, const Tape& tape,
                      double upstream) {
  PatternGrads grads(p);
  BackwardAccumulate(p, seq, tape, upstream, grads);
  return grads;
}

FiniteDiffReport FiniteDiffCheck(const PatternParams& p,
                                 std::span<const FeatureVector> seq,
                                 Matching matching, double step) {
  FiniteDiffReport report;
  const auto [log_score, tape] = ScoreWithTape(p, seq, matching);
  if (log_score == kNegInf) {
    report.unmatched = true;
    return report;
  }
  const TracedPath traced = TraceBestPath(tape, p);

  // A parameter moves each path's log value by at most step * |x| per use,
  // and is used at most once per slot.
  double max_abs_x = 1.0;
  for (const FeatureVector& x : seq) {
    x.ForEachNonzero([&](std::size_t, double v) { max_abs_x = std::max(max_abs_x, std::abs(v)); });
  }
  const double reach = step * static_cast<double>(seq.size() + 1) * max_abs_x;
  if (traced.min_margin < 10.0 * reach) {
    report.near_tie = true;
    return report;
  }

  const PatternGrads analytic = Backward(p, seq, tape, 1.0);
  std::vector<std::span<const double>> analytic_blocks;
  analytic.ForEachTensor([&](std::span<const double> t) { analytic_blocks.push_back(t); });

  const ScoreMode log_mode{matching, Domain::kLog};
  PatternParams probe = p;
  std::size_t block = 0;
  probe.ForEachTensor([&](std::span<double> tensor) {
    const std::span<const double> grad = analytic_blocks[block++];
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double original = tensor[i];
      if (!std::isfinite(original)) continue;
      tensor[i] = original + step;
      const double up = Score(probe, seq, log_mode);
      tensor[i] = original - step;
      const double down = Score(probe, seq, log_mode);
      tensor[i] = original;
      const double numeric = (up - down) / (2.0 * step);
      const double rel =
          std::abs(grad[i] - numeric) / std::max(std::abs(grad[i]), 1e-8);
      report.max_rel_error = std::max(report.max_rel_error, rel);
      ++report.parameters_checked;
    }
  });
  return report;
}

}  // namespace rlr
