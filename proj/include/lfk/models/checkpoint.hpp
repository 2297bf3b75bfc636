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

#ifndef LFK_MODELS_CHECKPOINT_HPP
#define LFK_MODELS_CHECKPOINT_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfk/baseline/word2vec_baseline.hpp"
#include "lfk/core/error.hpp"
#include "lfk/encoding/embeddings.hpp"
#include "lfk/models/classifier.hpp"
#include "lfk/models/cnn_model.hpp"
#include "lfk/models/config.hpp"

// Checkpoint layout (JSON, one object):
//
//   {
//     "format": "lfk-checkpoint", "version": 1,
//     "kind": "cnn" | "word2vec-baseline",
//     "seed": <uint64>,
//     "config": { model configuration; {"window_radius"} for the baseline },
//     "embeddings": {"path", "dim", "oov_policy", "oov_seed", "digest"},
//     "vocab": [fine-tuned words, sorted; empty unless fine-tuning],
//     "params": [{"name", "shape": [..], "values": [..]}, ...],
//     "metadata": { free-form, deterministic values only }
//   }
//
// Values are written in the shortest decimal form that parses back to the
// same double, so save/load is bit-exact.
namespace lfk {

inline constexpr int kCheckpointVersion = 1;

struct EmbeddingRef {
  std::string path;
  std::size_t dim = 0;
  OovPolicy oov_policy = OovPolicy::kRandomFixed;
  std::uint64_t oov_seed = 0;
  std::string digest;
};

struct Checkpoint {
  std::string kind;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  EmbeddingRef embeddings;
  std::vector<std::string> vocab;
  NamedParams params;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

inline NamedParams copy_params(const NamedParams &src) {
  NamedParams out;
  for (const auto &[n, t] : src) out.emplace_back(n, Tensor(t.shape(), t.values()));
  return out;
}

// Copies values by name; every destination parameter must be present with the
// same shape.
inline void assign_params(NamedParams &dst, const NamedParams &src) {
  for (auto &[name, t] : dst) {
    const Tensor *from = nullptr;
    for (const auto &[n, s] : src)
      if (n == name) from = &s;
    if (!from) throw InputError("checkpoint is missing parameter '" + name + "'");
    if (from->shape() != t.shape()) {
      throw InputError("parameter '" + name + "' has shape " + shape_str(from->shape()) +
                       " in the checkpoint but the model expects " + shape_str(t.shape()));
    }
    std::copy(from->data().begin(), from->data().end(), t.mutable_data().begin());
  }
  if (src.size() != dst.size()) {
    throw InputError("checkpoint holds " + std::to_string(src.size()) + " parameters, model has " +
                     std::to_string(dst.size()));
  }
}

inline nlohmann::ordered_json checkpoint_to_json(const Checkpoint &ck) {
  nlohmann::ordered_json j;
  j["format"] = "lfk-checkpoint";
  j["version"] = kCheckpointVersion;
  j["kind"] = ck.kind;
  j["seed"] = ck.seed;
  j["config"] = ck.config;
  j["embeddings"] = {{"path", ck.embeddings.path},
                     {"dim", ck.embeddings.dim},
                     {"oov_policy", to_string(ck.embeddings.oov_policy)},
                     {"oov_seed", ck.embeddings.oov_seed},
                     {"digest", ck.embeddings.digest}};
  j["vocab"] = ck.vocab;
  j["params"] = nlohmann::ordered_json::array();
  for (const auto &[name, t] : ck.params) {
    j["params"].push_back({{"name", name}, {"shape", t.shape()}, {"values", t.values()}});
  }
  j["metadata"] = ck.metadata;
  return j;
}

inline void write_checkpoint(const Checkpoint &ck, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << checkpoint_to_json(ck).dump() << '\n';
}

inline Checkpoint read_checkpoint(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Checkpoint ck;
  try {
    const auto j = nlohmann::ordered_json::parse(ss.str());
    if (j.at("format") != "lfk-checkpoint") throw InputError("'" + path + "' is not a checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw InputError("unsupported checkpoint version in '" + path + "'");
    }
    ck.kind = j.at("kind").get<std::string>();
    ck.seed = j.at("seed").get<std::uint64_t>();
    ck.config = j.at("config");
    const auto &e = j.at("embeddings");
    ck.embeddings.path = e.at("path").get<std::string>();
    ck.embeddings.dim = e.at("dim").get<std::size_t>();
    ck.embeddings.oov_policy = parse_oov_policy(e.at("oov_policy").get<std::string>());
    ck.embeddings.oov_seed = e.at("oov_seed").get<std::uint64_t>();
    ck.embeddings.digest = e.value("digest", "");
    ck.vocab = j.at("vocab").get<std::vector<std::string>>();
    for (const auto &p : j.at("params")) {
      ck.params.emplace_back(p.at("name").get<std::string>(),
                             Tensor(p.at("shape").get<Shape>(), p.at("values").get<std::vector<double>>()));
    }
    if (j.contains("metadata")) ck.metadata = j.at("metadata");
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(path, 1, e.what());
  } catch (const ShapeError &e) {
    throw ParseError(path, 1, e.what());
  }
  return ck;
}

inline Checkpoint make_checkpoint(const CnnModel &model, const EmbeddingRef &emb) {
  Checkpoint ck;
  ck.kind = "cnn";
  ck.seed = model.seed();
  ck.config = model.config().to_json();
  ck.embeddings = emb;
  ck.vocab = model.words().vocab();
  ck.params = copy_params(model.params());
  return ck;
}

inline Checkpoint make_checkpoint(const Word2VecBaseline &model, const EmbeddingRef &emb) {
  Checkpoint ck;
  ck.kind = "word2vec-baseline";
  ck.seed = model.seed();
  ck.config = {{"model", "word2vec-baseline"}, {"window_radius", model.radius()}};
  ck.embeddings = emb;
  ck.params = copy_params(model.params());
  return ck;
}

inline CnnModel load_cnn(const Checkpoint &ck, const EmbeddingTable &emb) {
  if (ck.kind != "cnn") throw InputError("checkpoint holds a '" + ck.kind + "' model, not a CNN");
  if (emb.dim() != ck.embeddings.dim) {
    throw InputError("embedding dimension " + std::to_string(emb.dim()) +
                     " differs from the checkpoint's " + std::to_string(ck.embeddings.dim));
  }
  CnnModel model(ModelConfig::from_json(ck.config), emb, ck.seed);
  if (!ck.vocab.empty()) model.set_finetune_vocab(ck.vocab);
  assign_params(model.params(), ck.params);
  return model;
}

inline Word2VecBaseline load_baseline(const Checkpoint &ck, const EmbeddingTable &emb) {
  if (ck.kind != "word2vec-baseline") {
    throw InputError("checkpoint holds a '" + ck.kind + "' model, not the word2vec baseline");
  }
  Word2VecBaseline model(emb, ck.seed, 0.1,
                         ck.config.value("window_radius", kBaselineWindowRadius));
  assign_params(model.params(), ck.params);
  return model;
}

}  // namespace lfk

#endif  // LFK_MODELS_CHECKPOINT_HPP
