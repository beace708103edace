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

#include "rlr/automaton.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "forward_log.h"
#include "rlr/gradients.h"

namespace rlr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double Gap(double x, double y) {
  if (x == kNegInf || y == kNegInf) return kInf;
  return std::abs(x - y);
}

}  // namespace

PatternTensors::PatternTensors(std::size_t num_states, std::size_t input_dim)
    : num_states(num_states), input_dim(input_dim) {
  if (num_states < 2) {
    throw std::invalid_argument("pattern needs at least 2 states, got " +
                                std::to_string(num_states));
  }
  self_loop_weights.assign(num_states * input_dim, 0.0);
  self_loop_bias.assign(num_states, 0.0);
  main_weights.assign((num_states - 1) * input_dim, 0.0);
  main_bias.assign(num_states - 1, 0.0);
  epsilon_bias.assign(num_states - 1, 0.0);
}

std::size_t PatternTensors::parameter_count() const {
  return self_loop_weights.size() + self_loop_bias.size() +
         main_weights.size() + main_bias.size() + epsilon_bias.size();
}

void PatternTensors::Validate() const {
  const std::size_t d = num_states;
  const std::size_t m = input_dim;
  if (d < 2) throw std::invalid_argument("pattern needs at least 2 states");
  if (self_loop_weights.size() != d * m || self_loop_bias.size() != d ||
      main_weights.size() != (d - 1) * m || main_bias.size() != d - 1 ||
      epsilon_bias.size() != d - 1) {
    throw std::invalid_argument("pattern tensors do not match " +
                                std::to_string(d) + " states x " +
                                std::to_string(m) + " features");
  }
}

std::string_view MatchingName(Matching matching) {
  return matching == Matching::kWhole ? "whole" : "subsequence";
}

Matching MatchingFromName(std::string_view name) {
  if (name == "whole") return Matching::kWhole;
  if (name == "subsequence") return Matching::kSubsequence;
  throw std::invalid_argument("unknown score mode: " + std::string(name));
}

std::string_view StepKindName(StepKind kind) {
  switch (kind) {
    case StepKind::kSelfLoop:
      return "self-loop";
    case StepKind::kMain:
      return "main";
    case StepKind::kEpsilon:
      return "epsilon";
    case StepKind::kRestart:
      return "restart";
  }
  return "unknown";
}

double SelfLoopLogit(const PatternParams& p, std::size_t state,
                     const FeatureVector& x) {
  return x.dot(p.self_loop_row(state)) + p.self_loop_bias[state];
}

double MainLogit(const PatternParams& p, std::size_t state,
                 const FeatureVector& x) {
  return x.dot(p.main_row(state)) + p.main_bias[state];
}

void CheckSequence(const PatternParams& p, std::span<const FeatureVector> seq) {
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (seq[t].dim() != p.input_dim) {
      throw std::invalid_argument(
          "sequence step " + std::to_string(t) + " has width " +
          std::to_string(seq[t].dim()) + ", pattern expects " +
          std::to_string(p.input_dim));
    }
  }
}

BandMatrix BuildTransition(const PatternParams& p, const FeatureVector& x) {
  if (x.dim() != p.input_dim) {
    throw std::invalid_argument("build_transition: input width " +
                                std::to_string(x.dim()) + " != " +
                                std::to_string(p.input_dim));
  }
  const std::size_t d = p.num_states;
  std::vector<double> diagonal(d);
  std::vector<double> superdiagonal(d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    diagonal[i] = Sigmoid(SelfLoopLogit(p, i, x));
    if (i + 1 < d) superdiagonal[i] = Sigmoid(MainLogit(p, i, x));
  }
  return BandMatrix(std::move(diagonal), std::move(superdiagonal));
}

BandMatrix BuildEpsilon(const PatternParams& p) {
  const std::size_t d = p.num_states;
  std::vector<double> superdiagonal(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    superdiagonal[i] = Sigmoid(p.epsilon_bias[i]);
  }
  return BandMatrix(std::vector<double>(d, 0.0), std::move(superdiagonal));
}

namespace {

// Direct-domain route: literal band-matrix products over max-product.
double ScoreDirect(const PatternParams& p, std::span<const FeatureVector> seq,
                   Matching matching) {
  const Semiring s = Semiring::MaxProduct();
  const std::size_t d = p.num_states;
  const BandMatrix closure = AsterateApprox(BuildEpsilon(p), s);
  const WeightVector initial = VecMat(OneHot(d, 0, s), closure, s);
  WeightVector h = initial;
  for (const FeatureVector& x : seq) {
    h = VecMat(VecMat(h, BuildTransition(p, x), s), closure, s);
    if (matching == Matching::kSubsequence) {
      for (std::size_t j = 0; j < d; ++j) h[j] = s.plus(h[j], initial[j]);
    }
  }
  return Dot(h, OneHot(d, d - 1, s), s);
}

}  // namespace

namespace internal {

double ForwardLog(const PatternParams& p, std::span<const FeatureVector> seq,
                  Matching matching, Tape* tape) {
  p.Validate();
  CheckSequence(p, seq);
  const std::size_t d = p.num_states;
  const std::size_t n = seq.size();

  std::vector<double> log_eps(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) log_eps[i] = LogSigmoid(p.epsilon_bias[i]);

  if (tape != nullptr) {
    *tape = Tape{};
    tape->num_states = d;
    tape->length = n;
    tape->matching = matching;
    tape->values.assign((n + 1) * d, kNegInf);
    tape->consumed.assign(n * d, kNegInf);
    tape->self_logits.assign(n * d, 0.0);
    tape->main_logits.assign(n * (d - 1), 0.0);
    tape->symbol_choice.assign(n * d, SymbolChoice::kUnreachable);
    tape->symbol_margin.assign(n * d, kInf);
    tape->took_epsilon.assign((n + 1) * d, 0);
    tape->epsilon_margin.assign((n + 1) * d, kInf);
    tape->took_restart.assign((n + 1) * d, 0);
    tape->restart_margin.assign((n + 1) * d, kInf);
  }

  // One epsilon hop per slot: hops read the pre-hop vector only.
  auto apply_epsilon = [&](const std::vector<double>& pre,
                           std::vector<double>& post, std::size_t stage) {
    for (std::size_t j = 0; j < d; ++j) {
      double best = pre[j];
      bool hop = false;
      double margin = kInf;
      if (j > 0) {
        const double via = pre[j - 1] + log_eps[j - 1];
        margin = Gap(via, pre[j]);
        if (via > pre[j]) {
          best = via;
          hop = true;
        }
      }
      post[j] = best;
      if (tape != nullptr) {
        tape->took_epsilon[stage * d + j] = hop ? 1 : 0;
        tape->epsilon_margin[stage * d + j] = margin;
      }
    }
  };

  std::vector<double> start(d, kNegInf);
  start[0] = 0.0;
  std::vector<double> initial(d);
  apply_epsilon(start, initial, 0);

  std::vector<double> prev = initial;
  std::vector<double> pre(d);
  std::vector<double> self_logit(d);
  std::vector<double> main_logit(d - 1);
  if (tape != nullptr) {
    tape->initial = initial;
    std::copy(initial.begin(), initial.end(), tape->values.begin());
  }

  for (std::size_t t = 1; t <= n; ++t) {
    const FeatureVector& x = seq[t - 1];
    for (std::size_t j = 0; j < d; ++j) {
      self_logit[j] = SelfLoopLogit(p, j, x);
      if (j + 1 < d) main_logit[j] = MainLogit(p, j, x);
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double stay = prev[j] + LogSigmoid(self_logit[j]);
      const double advance =
          j > 0 ? prev[j - 1] + LogSigmoid(main_logit[j - 1]) : kNegInf;
      SymbolChoice choice = SymbolChoice::kUnreachable;
      // Ties go to the main path.
      if (advance != kNegInf && advance >= stay) {
        pre[j] = advance;
        choice = SymbolChoice::kMain;
      } else if (stay != kNegInf) {
        pre[j] = stay;
        choice = SymbolChoice::kSelfLoop;
      } else {
        pre[j] = kNegInf;
      }
      if (tape != nullptr) {
        const std::size_t k = (t - 1) * d + j;
        tape->symbol_choice[k] = choice;
        tape->symbol_margin[k] = Gap(advance, stay);
        tape->consumed[k] = pre[j];
        tape->self_logits[k] = self_logit[j];
        if (j + 1 < d) tape->main_logits[(t - 1) * (d - 1) + j] = main_logit[j];
      }
    }
    apply_epsilon(pre, prev, t);
    if (matching == Matching::kSubsequence) {
      for (std::size_t j = 0; j < d; ++j) {
        const bool restart = initial[j] > prev[j];
        if (tape != nullptr) {
          tape->took_restart[t * d + j] = restart ? 1 : 0;
          tape->restart_margin[t * d + j] = Gap(initial[j], prev[j]);
        }
        if (restart) prev[j] = initial[j];
      }
    }
    if (tape != nullptr) {
      std::copy(prev.begin(), prev.end(), tape->values.begin() + t * d);
    }
  }

  const double log_score = prev[d - 1];
  if (tape != nullptr) tape->log_score = log_score;
  return log_score;
}

}  // namespace internal

double Score(const PatternParams& p, std::span<const FeatureVector> seq,
             ScoreMode mode) {
  if (mode.domain == Domain::kLog) {
    return internal::ForwardLog(p, seq, mode.matching, nullptr);
  }
  p.Validate();
  CheckSequence(p, seq);
  return ScoreDirect(p, seq, mode.matching);
}

std::optional<PathTrace> DecodeBestPath(const PatternParams& p,
                                        std::span<const FeatureVector> seq,
                                        ScoreMode mode) {
  Tape tape;
  internal::ForwardLog(p, seq, mode.matching, &tape);
  TracedPath traced = TraceBestPath(tape, p);
  if (!traced.matched) return std::nullopt;
  return std::move(traced.trace);
}

}  // namespace rlr
