// Copyright 2026 The LFK Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFK_MODELS_CONFIG_HPP
#define LFK_MODELS_CONFIG_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "lfk/autodiff/ops.hpp"
#include "lfk/core/error.hpp"

namespace lfk {

enum class Head { kConcat, kAttention };

struct ModelConfig {
  Head head = Head::kConcat;
  bool cfa = false;
  std::size_t layers = 1;
  std::vector<std::size_t> windows = {2, 3, 4, 5};
  std::size_t filters = 100;  // per window size
  double dropout = 0.5;       // on R only
  std::size_t attention_dim = 200;
  std::size_t ffn_hidden = 300;  // 0: R feeds the output layer directly
  std::size_t position_dim = 50;
  std::size_t max_offset = 30;
  ad::Activation cnn_activation = ad::Activation::kTanh;
  ad::Activation attention_activation = ad::Activation::kTanh;
  ad::Activation cfa_activation = ad::Activation::kSigmoid;
  ad::Activation ffn_activation = ad::Activation::kTanh;
  bool cfa_last_layer = true;
  bool finetune_words = false;
  double init_scale = 0.1;

  std::size_t conv_width() const { return filters * windows.size(); }

  void validate() const {
    if (layers < 1 || layers > 4) {
      throw InputError("layers must be between 1 and 4, got " + std::to_string(layers));
    }
    if (windows.empty()) throw InputError("at least one window size is required");
    for (std::size_t w : windows)
      if (w == 0) throw InputError("window sizes must be positive");
    if (filters == 0) throw InputError("filters must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw InputError("dropout must lie in [0, 1)");
    if (attention_dim == 0) throw InputError("attention_dim must be positive");
    if (position_dim == 0) throw InputError("position_dim must be positive");
    if (!(init_scale > 0.0)) throw InputError("init_scale must be positive");
  }

  // concat, attention, concat-cfa or attention-cfa.
  std::string variant() const {
    return std::string(head == Head::kConcat ? "concat" : "attention") + (cfa ? "-cfa" : "");
  }

  void set_variant(const std::string &name) {
    if (name == "concat" || name == "concat-cfa") {
      head = Head::kConcat;
    } else if (name == "attention" || name == "attention-cfa") {
      head = Head::kAttention;
    } else {
      throw InputError("unknown model '" + name +
                       "' (expected concat, attention, concat-cfa or attention-cfa)");
    }
    cfa = name.ends_with("-cfa");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["model"] = variant();
    j["layers"] = layers;
    j["windows"] = windows;
    j["filters"] = filters;
    j["dropout"] = dropout;
    j["attention_dim"] = attention_dim;
    j["ffn_hidden"] = ffn_hidden;
    j["position_dim"] = position_dim;
    j["max_offset"] = max_offset;
    j["cnn_activation"] = ad::to_string(cnn_activation);
    j["attention_activation"] = ad::to_string(attention_activation);
    j["cfa_activation"] = ad::to_string(cfa_activation);
    j["ffn_activation"] = ad::to_string(ffn_activation);
    j["cfa_last_layer"] = cfa_last_layer;
    j["finetune_words"] = finetune_words;
    j["init_scale"] = init_scale;
    return j;
  }

  // Missing keys keep their defaults.
  static ModelConfig from_json(const nlohmann::json &j) {
    ModelConfig c;
    try {
      if (j.contains("model")) c.set_variant(j.at("model").get<std::string>());
      c.layers = j.value("layers", c.layers);
      c.windows = j.value("windows", c.windows);
      c.filters = j.value("filters", c.filters);
      c.dropout = j.value("dropout", c.dropout);
      c.attention_dim = j.value("attention_dim", c.attention_dim);
      c.ffn_hidden = j.value("ffn_hidden", c.ffn_hidden);
      c.position_dim = j.value("position_dim", c.position_dim);
      c.max_offset = j.value("max_offset", c.max_offset);
      if (j.contains("cnn_activation"))
        c.cnn_activation = ad::parse_activation(j.at("cnn_activation").get<std::string>());
      if (j.contains("attention_activation"))
        c.attention_activation = ad::parse_activation(j.at("attention_activation").get<std::string>());
      if (j.contains("cfa_activation"))
        c.cfa_activation = ad::parse_activation(j.at("cfa_activation").get<std::string>());
      if (j.contains("ffn_activation"))
        c.ffn_activation = ad::parse_activation(j.at("ffn_activation").get<std::string>());
      c.cfa_last_layer = j.value("cfa_last_layer", c.cfa_last_layer);
      c.finetune_words = j.value("finetune_words", c.finetune_words);
      c.init_scale = j.value("init_scale", c.init_scale);
    } catch (const nlohmann::json::exception &e) {
      throw InputError(std::string("model config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

}  // namespace lfk

#endif  // LFK_MODELS_CONFIG_HPP
