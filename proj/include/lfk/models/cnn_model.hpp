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

#ifndef LFK_MODELS_CNN_MODEL_HPP
#define LFK_MODELS_CNN_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lfk/autodiff/ops.hpp"
#include "lfk/autodiff/tensor.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/data/corpus.hpp"
#include "lfk/encoding/encoding.hpp"
#include "lfk/models/classifier.hpp"
#include "lfk/models/config.hpp"

namespace lfk {

// One convolution per window size, all over the same input.
struct ConvLayerParams {
  std::vector<Tensor> filters;  // [w x d_in x filters] per window
  std::vector<Tensor> biases;   // [filters] per window
};

// Projections of V_K to the per-feature scale (gamma) and shift (beta).
struct CfaParams {
  Tensor w_gamma;  // [d x F]
  Tensor b_gamma;  // [F]
  Tensor w_beta;   // [d x F]
  Tensor b_beta;   // [F]
};

struct AttentionParams {
  Tensor w_u;  // [F x A]
  Tensor b_u;  // [A]
  Tensor w_c;  // [(d + F) x A]
  Tensor b_c;  // [A]
};

struct FfnParams {
  Tensor w_hidden;  // [R x H], undefined when there is no hidden layer
  Tensor b_hidden;
  Tensor w_out;  // [H x 2]
  Tensor b_out;
};

// Same-length convolutions for every window, each followed by `act`, joined
// feature-wise: [n x d_in] -> [n x filters * |windows|].
inline Tensor cnn_layer(Tape &tape, const Tensor &h, const ConvLayerParams &p, ad::Activation act) {
  std::vector<Tensor> parts;
  parts.reserve(p.filters.size());
  for (std::size_t i = 0; i < p.filters.size(); ++i) {
    parts.push_back(ad::activate(tape, ad::conv1d_same(tape, h, p.filters[i], p.biases[i]), act));
  }
  return parts.size() == 1 ? parts.front() : ad::concat(tape, parts);
}

// Feature-wise affine conditioning on the keywords: every position j becomes
// gamma * h_j + beta with gamma = act(W_g V_K + b_g), beta = act(W_b V_K + b_b).
inline Tensor cfa_condition(Tape &tape, const Tensor &h, const Tensor &vk, const CfaParams &p,
                            ad::Activation act, ForwardTrace *trace = nullptr) {
  const Tensor gamma = ad::activate(tape, ad::affine(tape, vk, p.w_gamma, p.b_gamma), act);
  const Tensor beta = ad::activate(tape, ad::affine(tape, vk, p.w_beta, p.b_beta), act);
  if (h.rank() != 2 || gamma.dim(0) != h.dim(1)) {
    throw ShapeError("cfa_condition: modulation width " + std::to_string(gamma.dim(0)) +
                     " does not match hidden states " + shape_str(h.shape()));
  }
  if (trace) {
    trace->gammas.push_back(gamma.values());
    trace->betas.push_back(beta.values());
  }
  const std::size_t n = h.dim(0);
  return ad::add(tape, ad::mul(tape, h, ad::broadcast_rows(tape, gamma, n)),
                 ad::broadcast_rows(tape, beta, n));
}

// R = [maxpool_time(H), V_K]
inline Tensor head_concat(Tape &tape, const Tensor &h, const Tensor &vk) {
  return ad::concat(tape, {ad::maxpool_time(tape, h), vk});
}

// Keyword-queried attention over the hidden states:
//   u_i = act(W_u h_i + b_u), c = act(W_c [V_K, h_a] + b_c),
//   alpha = softmax_i(c . u_i), R = sum_i alpha_i h_i.
inline Tensor head_attention(Tape &tape, const Tensor &h, const Tensor &vk, std::size_t anchor,
                             const AttentionParams &p, ad::Activation act,
                             ForwardTrace *trace = nullptr) {
  if (h.rank() != 2) throw ShapeError("head_attention: hidden states must be a matrix");
  const std::size_t n = h.dim(0), f = h.dim(1);
  if (anchor >= n) {
    throw InputError("head_attention: anchor " + std::to_string(anchor) + " out of range for " +
                     std::to_string(n) + " positions");
  }
  const Tensor u = ad::activate(tape, ad::affine(tape, h, p.w_u, p.b_u), act);  // [n x A]
  const Tensor query = ad::concat(tape, {vk, ad::row(tape, h, anchor)});
  const Tensor c = ad::activate(tape, ad::affine(tape, query, p.w_c, p.b_c), act);  // [A]
  const std::size_t a = c.dim(0);
  const Tensor scores = ad::matmul(tape, u, ad::reshape(tape, c, {a, 1}));  // [n x 1]
  const Tensor alpha = ad::softmax(tape, ad::reshape(tape, scores, {n}));
  if (trace) trace->alpha = alpha.values();
  const Tensor r = ad::matmul(tape, ad::reshape(tape, alpha, {1, n}), h);  // [1 x F]
  return ad::reshape(tape, r, {f});
}

// The four keyword-conditioned CNN classifiers: a stack of same-length
// convolution layers, optionally conditioned on V_K after each layer, pooled
// by a Concat or Attention head and classified by a small feed-forward net.
class CnnModel {
 public:
  CnnModel(const ModelConfig &config, const EmbeddingTable &emb, std::uint64_t seed)
      : config_(config), words_(emb), seed_(seed) {
    config_.validate();
    build();
    Rng rng = Rng(seed).substream("init");
    for (auto &[name, t] : params_) init_uniform(t, config_.init_scale, rng);
  }

  CnnModel(const CnnModel &) = delete;
  CnnModel &operator=(const CnnModel &) = delete;
  CnnModel(CnnModel &&) = default;
  CnnModel &operator=(CnnModel &&) = default;

  // Enables word fine-tuning over `vocab` (a no-op unless the config asks for
  // it). Must be called before training or loading a checkpoint.
  void set_finetune_vocab(const std::vector<std::string> &vocab) {
    if (!config_.finetune_words) return;
    words_.enable_finetune(vocab);
    params_.emplace_back("words.table", words_.trainable_table());
  }

  const ModelConfig &config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  NamedParams &params() { return params_; }
  const NamedParams &params() const { return params_; }
  const WordEncoder &words() const { return words_; }
  PositionTable &positions() { return positions_; }
  ConvLayerParams &conv(std::size_t layer) { return conv_.at(layer); }
  CfaParams &cfa(std::size_t layer) { return cfa_.at(layer); }
  AttentionParams &attention() { return attention_; }
  FfnParams &ffn() { return ffn_; }

  std::size_t representation_dim() const {
    return config_.conv_width() + (config_.head == Head::kConcat ? words_.dim() : 0);
  }

  bool conditions_layer(std::size_t layer) const {
    return config_.cfa && (layer + 1 < config_.layers || config_.cfa_last_layer);
  }

  // Two logits for (no match, match). Dropout on R is applied only in train
  // mode and needs `dropout_rng`.
  Tensor forward(Tape &tape, const LFKExample &ex, Mode mode, Rng *dropout_rng = nullptr,
                 ForwardTrace *trace = nullptr) const {
    ex.validate();
    const Tensor vk = keyword_repr(tape, ex.keywords, words_);
    Tensor h = encode(tape, ex.tokens, ex.anchor, words_, positions_).h0;
    for (std::size_t l = 0; l < config_.layers; ++l) {
      h = cnn_layer(tape, h, conv_[l], config_.cnn_activation);
      if (conditions_layer(l)) h = cfa_condition(tape, h, vk, cfa_[l], config_.cfa_activation, trace);
    }
    Tensor r = config_.head == Head::kConcat
                   ? head_concat(tape, h, vk)
                   : head_attention(tape, h, vk, ex.anchor, attention_,
                                    config_.attention_activation, trace);
    if (trace) trace->representation = r.values();
    if (mode == Mode::kTrain && config_.dropout > 0.0) {
      if (!dropout_rng) throw ContractError("train-mode forward needs a dropout stream");
      r = ad::dropout(tape, r, config_.dropout, *dropout_rng);
    }
    if (ffn_.w_hidden.defined()) {
      r = ad::activate(tape, ad::affine(tape, r, ffn_.w_hidden, ffn_.b_hidden),
                       config_.ffn_activation);
    }
    return ad::affine(tape, r, ffn_.w_out, ffn_.b_out);
  }

 private:
  void add(const std::string &name, Tensor &slot, Shape shape) {
    slot = Tensor::zeros(std::move(shape), true);
    params_.emplace_back(name, slot);
  }

  void build() {
    const std::size_t d = words_.dim();
    const std::size_t width = config_.conv_width();
    positions_ = PositionTable(config_.position_dim, config_.max_offset);
    params_.emplace_back("position.table", positions_.table());
    std::size_t d_in = config_.position_dim + d;
    conv_.resize(config_.layers);
    cfa_.resize(config_.layers);
    for (std::size_t l = 0; l < config_.layers; ++l) {
      const std::string prefix = "layer" + std::to_string(l) + ".";
      auto &cp = conv_[l];
      cp.filters.resize(config_.windows.size());
      cp.biases.resize(config_.windows.size());
      for (std::size_t i = 0; i < config_.windows.size(); ++i) {
        const std::size_t w = config_.windows[i];
        const std::string wp = prefix + "conv_w" + std::to_string(w) + "_" + std::to_string(i);
        add(wp + ".filters", cp.filters[i], {w, d_in, config_.filters});
        add(wp + ".bias", cp.biases[i], {config_.filters});
      }
      if (conditions_layer(l)) {
        auto &fp = cfa_[l];
        add(prefix + "cfa.gamma.weight", fp.w_gamma, {d, width});
        add(prefix + "cfa.gamma.bias", fp.b_gamma, {width});
        add(prefix + "cfa.beta.weight", fp.w_beta, {d, width});
        add(prefix + "cfa.beta.bias", fp.b_beta, {width});
      }
      d_in = width;
    }
    if (config_.head == Head::kAttention) {
      const std::size_t a = config_.attention_dim;
      add("attention.u.weight", attention_.w_u, {width, a});
      add("attention.u.bias", attention_.b_u, {a});
      add("attention.c.weight", attention_.w_c, {d + width, a});
      add("attention.c.bias", attention_.b_c, {a});
    }
    std::size_t r = representation_dim();
    if (config_.ffn_hidden > 0) {
      add("ffn.hidden.weight", ffn_.w_hidden, {r, config_.ffn_hidden});
      add("ffn.hidden.bias", ffn_.b_hidden, {config_.ffn_hidden});
      r = config_.ffn_hidden;
    }
    add("ffn.out.weight", ffn_.w_out, {r, 2});
    add("ffn.out.bias", ffn_.b_out, {2});
  }

  ModelConfig config_;
  WordEncoder words_;
  std::uint64_t seed_;
  PositionTable positions_;
  std::vector<ConvLayerParams> conv_;
  std::vector<CfaParams> cfa_;
  AttentionParams attention_;
  FfnParams ffn_;
  NamedParams params_;
};

static_assert(Classifier<CnnModel>);

}  // namespace lfk

#endif  // LFK_MODELS_CNN_MODEL_HPP
