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

#ifndef LFK_ENCODING_ENCODING_HPP
#define LFK_ENCODING_ENCODING_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "lfk/autodiff/ops.hpp"
#include "lfk/autodiff/tensor.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/encoding/embeddings.hpp"

namespace lfk {

// Learned embeddings of the signed distance i - anchor, clamped to
// [-max_offset, max_offset].
class PositionTable {
 public:
  PositionTable() = default;

  PositionTable(std::size_t dim, std::size_t max_offset)
      : dim_(dim),
        max_offset_(max_offset),
        table_(Tensor::zeros({2 * max_offset + 1, dim}, true)) {
    if (dim == 0) throw InputError("position embedding dimension must be positive");
  }

  std::size_t dim() const { return dim_; }
  std::size_t max_offset() const { return max_offset_; }
  Tensor &table() { return table_; }
  const Tensor &table() const { return table_; }

  std::size_t row_of(std::ptrdiff_t offset) const {
    const auto m = static_cast<std::ptrdiff_t>(max_offset_);
    return static_cast<std::size_t>(std::clamp(offset, -m, m) + m);
  }

 private:
  std::size_t dim_ = 0;
  std::size_t max_offset_ = 0;
  Tensor table_;
};

// Word vectors for a token sequence. By default vectors come from the frozen
// embedding table as constants; with fine-tuning enabled, a trainable copy of
// the listed vocabulary is used and everything else stays frozen.
class WordEncoder {
 public:
  explicit WordEncoder(const EmbeddingTable &emb) : emb_(&emb) {}

  const EmbeddingTable &embeddings() const { return *emb_; }
  std::size_t dim() const { return emb_->dim(); }

  void enable_finetune(std::vector<std::string> vocab) {
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    if (vocab.empty()) throw InputError("fine-tuning needs a non-empty vocabulary");
    vocab_ = std::move(vocab);
    index_.clear();
    std::vector<double> data(vocab_.size() * dim());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      index_.emplace(vocab_[i], i);
      emb_->lookup_into(vocab_[i], data.data() + i * dim());
    }
    trainable_ = Tensor({vocab_.size(), dim()}, std::move(data), true);
  }

  bool finetuned() const { return trainable_.defined(); }
  const std::vector<std::string> &vocab() const { return vocab_; }
  Tensor &trainable_table() { return trainable_; }
  const Tensor &trainable_table() const { return trainable_; }

  // [n x d] rows for the tokens, in order.
  Tensor rows(Tape &tape, const std::vector<std::string> &tokens) const {
    if (tokens.empty()) throw InputError("cannot embed an empty token list");
    const std::size_t n = tokens.size(), d = dim();
    std::vector<double> out(n * d);
    if (!finetuned()) {
      for (std::size_t i = 0; i < n; ++i) emb_->lookup_into(tokens[i], out.data() + i * d);
      return Tensor({n, d}, std::move(out));
    }
    constexpr std::size_t kFrozen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> idx(n, kFrozen);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = index_.find(tokens[i]);
      if (it != index_.end()) {
        idx[i] = it->second;
        std::copy_n(trainable_.data().begin() + it->second * d, d, out.begin() + i * d);
      } else {
        emb_->lookup_into(tokens[i], out.data() + i * d);
      }
    }
    const bool grad = tape.enabled();
    Tensor y({n, d}, std::move(out), grad);
    if (grad) {
      Tensor table = trainable_;
      tape.record([table, y, idx, d]() mutable {
        const auto g = y.grad();
        auto gt = table.mutable_grad();
        for (std::size_t r = 0; r < idx.size(); ++r) {
          if (idx[r] == kFrozen) continue;
          for (std::size_t j = 0; j < d; ++j) gt[idx[r] * d + j] += g[r * d + j];
        }
      });
    }
    return y;
  }

 private:
  const EmbeddingTable *emb_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  Tensor trainable_;
};

struct EncodedSentence {
  Tensor h0;  // [n x (u + d)]
  std::size_t anchor = 0;
};

// Row i is [position(i - anchor), word(x_i)].
inline EncodedSentence encode(Tape &tape, const std::vector<std::string> &tokens,
                              std::size_t anchor, const WordEncoder &words,
                              const PositionTable &pos) {
  if (tokens.empty()) throw InputError("cannot encode an empty sentence");
  if (anchor >= tokens.size()) {
    throw InputError("anchor " + std::to_string(anchor) + " out of range for a sentence of " +
                     std::to_string(tokens.size()) + " tokens");
  }
  std::vector<std::size_t> rows(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    rows[i] = pos.row_of(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(anchor));
  }
  Tensor p = ad::gather_rows(tape, pos.table(), rows);
  Tensor w = words.rows(tape, tokens);
  return {ad::concat(tape, {p, w}), anchor};
}

inline EncodedSentence encode(const std::vector<std::string> &tokens, std::size_t anchor,
                              const EmbeddingTable &emb, const PositionTable &pos) {
  Tape off(false);
  return encode(off, tokens, anchor, WordEncoder(emb), pos);
}

// Mean of the keyword vectors (V_K).
inline Tensor keyword_repr(Tape &tape, const std::vector<std::string> &keywords,
                           const WordEncoder &words) {
  if (keywords.empty()) throw InputError("keyword set is empty");
  return ad::mean_rows(tape, words.rows(tape, keywords));
}

inline Tensor keyword_repr(const std::vector<std::string> &keywords, const EmbeddingTable &emb) {
  Tape off(false);
  return keyword_repr(off, keywords, WordEncoder(emb));
}

}  // namespace lfk

#endif  // LFK_ENCODING_ENCODING_HPP
