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

#ifndef RLR_MODEL_IO_H_
#define RLR_MODEL_IO_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rlr/model.h"

namespace rlr {

// Versioned JSON document ("format": "rlr-model", "version": 1) holding
// feature_dim, transform, score mode, every pattern's shape and tensors, the
// head layers and training metadata. Doubles are written in shortest
// round-trip form and non-finite values as the strings "inf", "-inf", "nan",
// so save -> load reproduces the model bit for bit.
nlohmann::json ModelToJson(const RlrModel& model);
RlrModel ModelFromJson(const nlohmann::json& doc);

std::string SerializeModel(const RlrModel& model);
RlrModel DeserializeModel(const std::string& text);

void SaveModel(const RlrModel& model, const std::filesystem::path& path);
RlrModel LoadModel(const std::filesystem::path& path);

}  // namespace rlr

#endif  // RLR_MODEL_IO_H_
