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

#ifndef RLR_SRC_FORWARD_LOG_H_
#define RLR_SRC_FORWARD_LOG_H_

#include <span>

#include "rlr/automaton.h"
#include "rlr/gradients.h"

namespace rlr::internal {

// Shared max-plus recurrence behind Score(kLog) and ScoreWithTape. When
// `tape` is non-null every decision is recorded into it.
double ForwardLog(const PatternParams& p, std::span<const FeatureVector> seq,
                  Matching matching, Tape* tape);

}  // namespace rlr::internal

#endif  // RLR_SRC_FORWARD_LOG_H_
