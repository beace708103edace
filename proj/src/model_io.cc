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

#include "rlr/model_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rlr/errors.h"

namespace rlr {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "rlr-model";
constexpr int kVersion = 1;

json NumberToJson(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double NumberFromJson(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw DataError("expected a number, got " + j.dump());
}

json ArrayToJson(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(NumberToJson(v));
  return out;
}

std::vector<double> ArrayFromJson(const json& j, std::size_t expected,
                                  const char* field) {
  if (!j.is_array() || j.size() != expected) {
    throw DataError(std::string("model field ") + field + " must have " +
                    std::to_string(expected) + " entries");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(NumberFromJson(v));
  return out;
}

}  // namespace

json ModelToJson(const RlrModel& model) {
  json patterns = json::array();
  for (const PatternParams& p : model.patterns) {
    patterns.push_back({{"num_states", p.num_states},
                        {"input_dim", p.input_dim},
                        {"self_loop_weights", ArrayToJson(p.self_loop_weights)},
                        {"self_loop_bias", ArrayToJson(p.self_loop_bias)},
                        {"main_weights", ArrayToJson(p.main_weights)},
                        {"main_bias", ArrayToJson(p.main_bias)},
                        {"epsilon_bias", ArrayToJson(p.epsilon_bias)}});
  }
  json layers = json::array();
  for (const DenseLayer& layer : model.head.layers) {
    layers.push_back({{"inputs", layer.inputs},
                      {"outputs", layer.outputs},
                      {"activation", ActivationName(layer.activation)},
                      {"weights", ArrayToJson(layer.weights)},
                      {"bias", ArrayToJson(layer.bias)}});
  }
  const TrainingMetadata& meta = model.metadata;
  return {{"format", kFormat},
          {"version", kVersion},
          {"feature_dim", model.feature_dim},
          {"feature_transform",
           model.transform == FeatureTransform::kFlatten ? "flatten" : "none"},
          {"score_mode", MatchingName(model.matching)},
          {"patterns", std::move(patterns)},
          {"head", {{"layers", std::move(layers)}}},
          {"metadata",
           {{"kind", meta.kind},
            {"seed", meta.seed},
            {"epochs_run", meta.epochs_run},
            {"best_epoch", meta.best_epoch},
            {"best_val_ll", NumberToJson(meta.best_val_ll)}}}};
}

RlrModel ModelFromJson(const json& doc) {
  try {
    if (doc.value("format", "") != kFormat) throw DataError("not an rlr-model document");
    if (doc.at("version").get<int>() != kVersion) {
      throw DataError("unsupported model version " + doc.at("version").dump());
    }
    RlrModel model;
    model.feature_dim = doc.at("feature_dim").get<std::size_t>();
    const std::string transform = doc.at("feature_transform").get<std::string>();
    if (transform == "flatten") {
      model.transform = FeatureTransform::kFlatten;
    } else if (transform != "none") {
      throw DataError("unknown feature_transform " + transform);
    }
    model.matching = MatchingFromName(doc.at("score_mode").get<std::string>());
    for (const json& jp : doc.at("patterns")) {
      PatternParams p(jp.at("num_states").get<std::size_t>(),
                      jp.at("input_dim").get<std::size_t>());
      p.self_loop_weights = ArrayFromJson(jp.at("self_loop_weights"),
                                          p.self_loop_weights.size(), "self_loop_weights");
      p.self_loop_bias =
          ArrayFromJson(jp.at("self_loop_bias"), p.self_loop_bias.size(), "self_loop_bias");
      p.main_weights =
          ArrayFromJson(jp.at("main_weights"), p.main_weights.size(), "main_weights");
      p.main_bias = ArrayFromJson(jp.at("main_bias"), p.main_bias.size(), "main_bias");
      p.epsilon_bias =
          ArrayFromJson(jp.at("epsilon_bias"), p.epsilon_bias.size(), "epsilon_bias");
      model.patterns.push_back(std::move(p));
    }
    for (const json& jl : doc.at("head").at("layers")) {
      DenseLayer layer;
      layer.inputs = jl.at("inputs").get<std::size_t>();
      layer.outputs = jl.at("outputs").get<std::size_t>();
      layer.activation = ActivationFromName(jl.at("activation").get<std::string>());
      layer.weights =
          ArrayFromJson(jl.at("weights"), layer.inputs * layer.outputs, "weights");
      layer.bias = ArrayFromJson(jl.at("bias"), layer.outputs, "bias");
      model.head.layers.push_back(std::move(layer));
    }
    if (doc.contains("metadata")) {
      const json& jm = doc.at("metadata");
      model.metadata.kind = jm.value("kind", "rlr");
      model.metadata.seed = jm.value("seed", std::uint64_t{0});
      model.metadata.epochs_run = jm.value("epochs_run", std::size_t{0});
      model.metadata.best_epoch = jm.value("best_epoch", std::size_t{0});
      if (jm.contains("best_val_ll")) {
        model.metadata.best_val_ll = NumberFromJson(jm.at("best_val_ll"));
      }
    }
    model.Validate();
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid model: ") + e.what());
  }
}

std::string SerializeModel(const RlrModel& model) {
  return ModelToJson(model).dump(1) + "\n";
}

RlrModel DeserializeModel(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
  return ModelFromJson(doc);
}

void SaveModel(const RlrModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << SerializeModel(model);
  if (!out) throw DataError("write failed: " + path.string());
}

RlrModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DeserializeModel(buffer.str());
}

}  // namespace rlr
