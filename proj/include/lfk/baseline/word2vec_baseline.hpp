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

#ifndef LFK_BASELINE_WORD2VEC_BASELINE_HPP
#define LFK_BASELINE_WORD2VEC_BASELINE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lfk/autodiff/ops.hpp"
#include "lfk/data/corpus.hpp"
#include "lfk/encoding/embeddings.hpp"
#include "lfk/encoding/encoding.hpp"
#include "lfk/models/classifier.hpp"

namespace lfk {

// Averaged-embedding features: the anchor's context window and the keywords.
struct BaselineFeatures {
  std::vector<double> context_avg;  // [d]
  std::vector<double> keyword_avg;  // [d]

  std::vector<double> concatenated() const {
    std::vector<double> out(context_avg);
    out.insert(out.end(), keyword_avg.begin(), keyword_avg.end());
    return out;
  }
};

// A window of 5 tokens is read as anchor +- 2.
inline constexpr std::size_t kBaselineWindowRadius = 2;

inline BaselineFeatures featurize(const LFKExample &ex, const EmbeddingTable &emb,
                                  std::size_t radius = kBaselineWindowRadius) {
  ex.validate();
  const std::size_t d = emb.dim();
  const std::size_t lo = ex.anchor >= radius ? ex.anchor - radius : 0;
  const std::size_t hi = std::min(ex.tokens.size() - 1, ex.anchor + radius);
  BaselineFeatures f;
  f.context_avg.assign(d, 0.0);
  std::vector<double> v(d);
  for (std::size_t i = lo; i <= hi; ++i) {
    emb.lookup_into(ex.tokens[i], v.data());
    for (std::size_t j = 0; j < d; ++j) f.context_avg[j] += v[j];
  }
  const double inv = 1.0 / static_cast<double>(hi - lo + 1);
  for (double &x : f.context_avg) x *= inv;
  f.keyword_avg = keyword_repr(ex.keywords, emb).values();
  return f;
}

// Maximum-entropy classifier over the 2d features: one linear layer to two
// logits, trained with cross-entropy by the shared loop.
class Word2VecBaseline {
 public:
  Word2VecBaseline(const EmbeddingTable &emb, std::uint64_t seed, double init_scale = 0.1,
                   std::size_t radius = kBaselineWindowRadius)
      : emb_(&emb), seed_(seed), radius_(radius) {
    weight_ = Tensor::zeros({2 * emb.dim(), 2}, true);
    bias_ = Tensor::zeros({2}, true);
    params_ = {{"linear.weight", weight_}, {"linear.bias", bias_}};
    Rng rng = Rng(seed).substream("init");
    init_uniform(weight_, init_scale, rng);
    init_uniform(bias_, init_scale, rng);
  }

  Word2VecBaseline(const Word2VecBaseline &) = delete;
  Word2VecBaseline &operator=(const Word2VecBaseline &) = delete;
  Word2VecBaseline(Word2VecBaseline &&) = default;
  Word2VecBaseline &operator=(Word2VecBaseline &&) = default;

  std::uint64_t seed() const { return seed_; }
  std::size_t radius() const { return radius_; }
  const EmbeddingTable &embeddings() const { return *emb_; }
  NamedParams &params() { return params_; }
  const NamedParams &params() const { return params_; }
  Tensor &weight() { return weight_; }
  Tensor &bias() { return bias_; }

  Tensor forward(Tape &tape, const LFKExample &ex, Mode, Rng * = nullptr,
                 ForwardTrace *trace = nullptr) const {
    Tensor x = Tensor::vector(featurize(ex, *emb_, radius_).concatenated());
    if (trace) trace->representation = x.values();
    return ad::affine(tape, x, weight_, bias_);
  }

 private:
  const EmbeddingTable *emb_;
  std::uint64_t seed_;
  std::size_t radius_;
  Tensor weight_;
  Tensor bias_;
  NamedParams params_;
};

static_assert(Classifier<Word2VecBaseline>);

}  // namespace lfk

#endif  // LFK_BASELINE_WORD2VEC_BASELINE_HPP
