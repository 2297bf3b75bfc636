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

#include <gtest/gtest.h>

#include <cmath>

#include "lfk/autodiff/gradcheck.hpp"
#include "lfk/models/cnn_model.hpp"
#include "test_util.hpp"

namespace lfk {
namespace {

using testing::make_table;
using testing::random_example;
using testing::random_tensor;
using testing::word_list;
using Mat = std::vector<std::vector<double>>;

// -- naive reference implementation -------------------------------------------------

double act(ad::Activation a, double x) {
  switch (a) {
    case ad::Activation::kTanh: return std::tanh(x);
    case ad::Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ad::Activation::kRelu: return x > 0 ? x : 0;
    case ad::Activation::kIdentity: return x;
  }
  return x;
}

const Tensor &param(const CnnModel &m, const std::string &name) {
  for (const auto &[n, t] : m.params())
    if (n == name) return t;
  throw std::runtime_error("no parameter " + name);
}

std::vector<double> affine_ref(const std::vector<double> &x, const Tensor &w, const Tensor &b) {
  const std::size_t out = w.dim(1);
  std::vector<double> y(out);
  for (std::size_t o = 0; o < out; ++o) {
    double s = b[o];
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * w.at(i, o);
    y[o] = s;
  }
  return y;
}

// Filters [w x d x F]; output row i sees input rows i - (w-1)/2 .. i + w/2.
Mat conv_ref(const Mat &h, const Tensor &filt, const Tensor &bias) {
  const std::size_t w = filt.dim(0), d = filt.dim(1), f = filt.dim(2);
  const long lp = static_cast<long>((w - 1) / 2);
  const long n = static_cast<long>(h.size());
  Mat out(h.size(), std::vector<double>(f));
  for (long i = 0; i < n; ++i)
    for (std::size_t o = 0; o < f; ++o) {
      double s = bias[o];
      for (std::size_t k = 0; k < w; ++k) {
        const long src = i - lp + static_cast<long>(k);
        if (src < 0 || src >= n) continue;
        for (std::size_t c = 0; c < d; ++c) s += filt.data()[(k * d + c) * f + o] * h[src][c];
      }
      out[i][o] = s;
    }
  return out;
}

std::vector<double> reference_logits(const CnnModel &m, const EmbeddingTable &emb,
                                     const LFKExample &ex) {
  const ModelConfig &cfg = m.config();
  const std::size_t d = emb.dim();
  std::vector<double> vk(d, 0.0);
  for (const auto &k : ex.keywords) {
    const auto v = emb.lookup(k);
    for (std::size_t j = 0; j < d; ++j) vk[j] += v[j] / static_cast<double>(ex.keywords.size());
  }
  const Tensor &pos = param(m, "position.table");
  const long mo = static_cast<long>(cfg.max_offset);
  Mat h;
  for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
    long off = static_cast<long>(i) - static_cast<long>(ex.anchor);
    off = std::max(-mo, std::min(mo, off));
    std::vector<double> row;
    for (std::size_t j = 0; j < cfg.position_dim; ++j) row.push_back(pos.at(off + mo, j));
    for (double v : emb.lookup(ex.tokens[i])) row.push_back(v);
    h.push_back(row);
  }
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    Mat next(h.size());
    for (std::size_t wi = 0; wi < cfg.windows.size(); ++wi) {
      const std::string cp = p + "conv_w" + std::to_string(cfg.windows[wi]) + "_" + std::to_string(wi);
      const Mat part = conv_ref(h, param(m, cp + ".filters"), param(m, cp + ".bias"));
      for (std::size_t i = 0; i < h.size(); ++i)
        for (double v : part[i]) next[i].push_back(act(cfg.cnn_activation, v));
    }
    h = next;
    if (m.conditions_layer(l)) {
      auto g = affine_ref(vk, param(m, p + "cfa.gamma.weight"), param(m, p + "cfa.gamma.bias"));
      auto b = affine_ref(vk, param(m, p + "cfa.beta.weight"), param(m, p + "cfa.beta.bias"));
      for (auto &row : h)
        for (std::size_t j = 0; j < row.size(); ++j)
          row[j] = act(cfg.cfa_activation, g[j]) * row[j] + act(cfg.cfa_activation, b[j]);
    }
  }
  std::vector<double> r;
  if (cfg.head == Head::kConcat) {
    r = h[0];
    for (const auto &row : h)
      for (std::size_t j = 0; j < row.size(); ++j) r[j] = std::max(r[j], row[j]);
    r.insert(r.end(), vk.begin(), vk.end());
  } else {
    std::vector<double> q = vk;
    q.insert(q.end(), h[ex.anchor].begin(), h[ex.anchor].end());
    auto c = affine_ref(q, param(m, "attention.c.weight"), param(m, "attention.c.bias"));
    for (double &v : c) v = act(cfg.attention_activation, v);
    std::vector<double> score;
    for (const auto &row : h) {
      auto u = affine_ref(row, param(m, "attention.u.weight"), param(m, "attention.u.bias"));
      double s = 0;
      for (std::size_t j = 0; j < u.size(); ++j) s += act(cfg.attention_activation, u[j]) * c[j];
      score.push_back(s);
    }
    const double mx = *std::max_element(score.begin(), score.end());
    double z = 0;
    for (double &s : score) z += (s = std::exp(s - mx));
    r.assign(h[0].size(), 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < r.size(); ++j) r[j] += score[i] / z * h[i][j];
  }
  if (cfg.ffn_hidden > 0) {
    r = affine_ref(r, param(m, "ffn.hidden.weight"), param(m, "ffn.hidden.bias"));
    for (double &v : r) v = act(cfg.ffn_activation, v);
  }
  return affine_ref(r, param(m, "ffn.out.weight"), param(m, "ffn.out.bias"));
}

ModelConfig tiny_config(const std::string &variant) {
  ModelConfig c;
  c.set_variant(variant);
  c.windows = {2, 3};
  c.filters = 3;
  c.layers = 2;
  c.position_dim = 4;
  c.max_offset = 3;
  c.attention_dim = 5;
  c.ffn_hidden = 6;
  c.dropout = 0.0;
  c.init_scale = 0.5;
  return c;
}

const std::vector<std::string> kVariants = {"concat", "attention", "concat-cfa", "attention-cfa"};

// -- layers --------------------------------------------------------------------------

TEST(CnnLayer, ShapeIsFiltersTimesWindows) {
  Rng rng(1);
  ConvLayerParams p;
  for (std::size_t w : {2, 3, 4, 5}) {
    p.filters.push_back(random_tensor({w, 350, 100}, rng, -0.05, 0.05));
    p.biases.push_back(random_tensor({100}, rng));
  }
  Tape off(false);
  const Tensor out = cnn_layer(off, random_tensor({7, 350}, rng), p, ad::Activation::kTanh);
  EXPECT_EQ(out.shape(), (Shape{7, 400}));
}

TEST(CnnLayer, MatchesPerWindowLoopOracle) {
  Rng rng(2);
  ConvLayerParams p;
  for (std::size_t w : {1, 2, 3, 4}) {
    p.filters.push_back(random_tensor({w, 5, 3}, rng));
    p.biases.push_back(random_tensor({3}, rng));
  }
  const Tensor h = random_tensor({6, 5}, rng);
  Mat hm(6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j) hm[i].push_back(h.at(i, j));
  Tape off(false);
  const Tensor out = cnn_layer(off, h, p, ad::Activation::kTanh);
  for (std::size_t wi = 0; wi < 4; ++wi) {
    const Mat ref = conv_ref(hm, p.filters[wi], p.biases[wi]);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t f = 0; f < 3; ++f) EXPECT_NEAR(out.at(i, wi * 3 + f), std::tanh(ref[i][f]), 1e-12);
  }
}

TEST(Cfa, IdentityModulationLeavesInputUnchanged) {
  Rng rng(3);
  const Tensor h = random_tensor({5, 4}, rng);
  const Tensor vk = random_tensor({3}, rng);
  CfaParams p{Tensor::zeros({3, 4}), Tensor::filled({4}, 1.0), Tensor::zeros({3, 4}), Tensor::zeros({4})};
  Tape off(false);
  const Tensor out = cfa_condition(off, h, vk, p, ad::Activation::kIdentity);
  EXPECT_EQ(out.values(), h.values());
}

TEST(Cfa, ZeroKeywordsGiveBiasOnlyModulation) {
  Rng rng(4);
  const Tensor h = random_tensor({3, 4}, rng);
  CfaParams p{random_tensor({2, 4}, rng), random_tensor({4}, rng), random_tensor({2, 4}, rng),
              random_tensor({4}, rng)};
  Tape off(false);
  const Tensor out = cfa_condition(off, h, Tensor::zeros({2}), p, ad::Activation::kSigmoid);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double g = 1.0 / (1.0 + std::exp(-p.b_gamma[j]));
      const double b = 1.0 / (1.0 + std::exp(-p.b_beta[j]));
      EXPECT_NEAR(out.at(i, j), g * h.at(i, j) + b, 1e-14);
    }
}

TEST(Cfa, MatchesLoopOracleOnRandomInputs) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(6), f = 1 + rng.below(5), d = 1 + rng.below(4);
    const Tensor h = random_tensor({n, f}, rng), vk = random_tensor({d}, rng);
    CfaParams p{random_tensor({d, f}, rng), random_tensor({f}, rng), random_tensor({d, f}, rng),
                random_tensor({f}, rng)};
    Tape off(false);
    const Tensor out = cfa_condition(off, h, vk, p, ad::Activation::kSigmoid);
    const auto g = affine_ref(vk.values(), p.w_gamma, p.b_gamma);
    const auto b = affine_ref(vk.values(), p.w_beta, p.b_beta);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < f; ++j)
        EXPECT_NEAR(out.at(i, j), act(ad::Activation::kSigmoid, g[j]) * h.at(i, j) +
                                      act(ad::Activation::kSigmoid, b[j]), 1e-12);
  }
}

TEST(Cfa, WidthMismatchIsShapeError) {
  Rng rng(6);
  CfaParams p{random_tensor({2, 3}, rng), random_tensor({3}, rng), random_tensor({2, 3}, rng),
              random_tensor({3}, rng)};
  Tape off(false);
  EXPECT_THROW(cfa_condition(off, random_tensor({4, 5}, rng), random_tensor({2}, rng), p,
                             ad::Activation::kSigmoid),
               ShapeError);
}

TEST(Heads, ConcatIsMaxpoolThenKeywords) {
  const Tensor h = Tensor::matrix(2, 3, {1, 5, 3, 2, 0, 4});
  Tape off(false);
  const Tensor r = head_concat(off, h, Tensor::vector({7, 8}));
  EXPECT_EQ(r.values(), (std::vector<double>{2, 5, 4, 7, 8}));
}

TEST(Heads, AttentionOverIdenticalStatesReturnsThatState) {
  Rng rng(7);
  const Tensor h = Tensor::matrix(4, 3, {1, -2, 3, 1, -2, 3, 1, -2, 3, 1, -2, 3});
  AttentionParams p{random_tensor({3, 4}, rng), random_tensor({4}, rng), random_tensor({5, 4}, rng),
                    random_tensor({4}, rng)};
  Tape off(false);
  ForwardTrace trace;
  const Tensor r = head_attention(off, h, random_tensor({2}, rng), 1, p, ad::Activation::kTanh, &trace);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(r[j], h.at(0, j), 1e-14);
  for (double a : trace.alpha) EXPECT_NEAR(a, 0.25, 1e-15);
}

TEST(Heads, SinglePositionSequences) {
  Rng rng(9);
  const Tensor h = random_tensor({1, 3}, rng), vk = random_tensor({2}, rng);
  AttentionParams p{random_tensor({3, 4}, rng), random_tensor({4}, rng), random_tensor({5, 4}, rng),
                    random_tensor({4}, rng)};
  Tape off(false);
  ForwardTrace trace;
  const Tensor att = head_attention(off, h, vk, 0, p, ad::Activation::kTanh, &trace);
  EXPECT_EQ(trace.alpha, std::vector<double>{1.0});
  EXPECT_EQ(att.values(), h.values());
  const Tensor cat = head_concat(off, h, vk);
  EXPECT_EQ(cat.values(), (std::vector<double>{h[0], h[1], h[2], vk[0], vk[1]}));
}

TEST(Heads, AttentionAnchorOutOfRange) {
  Rng rng(8);
  AttentionParams p{random_tensor({3, 4}, rng), random_tensor({4}, rng), random_tensor({5, 4}, rng),
                    random_tensor({4}, rng)};
  Tape off(false);
  EXPECT_THROW(head_attention(off, random_tensor({2, 3}, rng), random_tensor({2}, rng), 2, p,
                              ad::Activation::kTanh),
               InputError);
}

// -- full model -----------------------------------------------------------------------

class Variants : public ::testing::TestWithParam<std::string> {};

TEST_P(Variants, ForwardMatchesNaiveReference) {
  const auto words = word_list(20);
  const EmbeddingTable emb = make_table(words, 8);
  ModelConfig cfg = tiny_config(GetParam());
  cfg.layers = 1 + (GetParam().size() % 3);
  const CnnModel model(cfg, emb, 11);
  Rng rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    LFKExample ex = random_example(rng, words, 1, 9);
    if (trial % 5 == 0) ex.keywords[1] = "unseen";
    Tape off(false);
    const Tensor logits = model.forward(off, ex, Mode::kEval);
    const auto ref = reference_logits(model, emb, ex);
    ASSERT_EQ(logits.numel(), 2u);
    EXPECT_NEAR(logits[0], ref[0], 1e-10);
    EXPECT_NEAR(logits[1], ref[1], 1e-10);
  }
}

TEST_P(Variants, GradientsMatchFiniteDifferences) {
  const auto words = word_list(12);
  const EmbeddingTable emb = make_table(words, 8);
  CnnModel model(tiny_config(GetParam()), emb, 21);
  Rng rng(22);
  std::vector<LFKExample> batch;
  for (int i = 0; i < 2; ++i) batch.push_back(random_example(rng, words, 5, 5));
  batch[0].label = 1;
  batch[1].label = 0;
  auto loss = [&](Tape &tape) {
    Tensor total;
    for (const auto &ex : batch) {
      Tensor l = ad::cross_entropy(tape, model.forward(tape, ex, Mode::kEval), ex.label);
      total = total.defined() ? ad::add(tape, total, l) : l;
    }
    return total;
  };
  const auto result = ad::gradcheck(loss, model.params());
  EXPECT_LT(result.max_rel_error, 1e-4)
      << result.worst_param << "[" << result.worst_index << "] analytic " << result.worst_analytic
      << " numeric " << result.worst_numeric;
  EXPECT_GT(result.checked, 100u);
}

TEST_P(Variants, EveryParameterReceivesGradient) {
  const auto words = word_list(12);
  const EmbeddingTable emb = make_table(words, 8);
  CnnModel model(tiny_config(GetParam()), emb, 31);
  Rng rng(32);
  Tape tape;
  Tensor total;
  for (int i = 0; i < 4; ++i) {
    LFKExample ex = random_example(rng, words, 3, 8);
    Tensor l = ad::cross_entropy(tape, model.forward(tape, ex, Mode::kEval), ex.label);
    total = total.defined() ? ad::add(tape, total, l) : l;
  }
  tape.backward(total);
  for (const auto &[name, t] : model.params()) {
    double mag = 0;
    for (double g : t.grad()) mag += std::abs(g);
    EXPECT_GT(mag, 0.0) << name;
  }
}

TEST_P(Variants, EvalIsDeterministicAndKeywordOrderFree) {
  const auto words = word_list(15);
  const EmbeddingTable emb = make_table(words, 8);
  const CnnModel model(tiny_config(GetParam()), emb, 41);
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    LFKExample ex = random_example(rng, words, 2, 8);
    Tape off(false);
    const auto a = model.forward(off, ex, Mode::kEval).values();
    EXPECT_EQ(a, model.forward(off, ex, Mode::kEval).values());
    rng.shuffle(ex.keywords);
    const auto b = model.forward(off, ex, Mode::kEval).values();
    EXPECT_NEAR(a[0], b[0], 1e-12);
    EXPECT_NEAR(a[1], b[1], 1e-12);
  }
}

TEST_P(Variants, SameSeedSameParameters) {
  const EmbeddingTable emb = make_table(word_list(5), 8);
  const CnnModel a(tiny_config(GetParam()), emb, 7), b(tiny_config(GetParam()), emb, 7),
      c(tiny_config(GetParam()), emb, 8);
  ASSERT_EQ(a.params().size(), b.params().size());
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    EXPECT_EQ(a.params()[i].first, b.params()[i].first);
    EXPECT_EQ(a.params()[i].second.values(), b.params()[i].second.values());
  }
  EXPECT_NE(a.params()[0].second.values(), c.params()[0].second.values());
}

INSTANTIATE_TEST_SUITE_P(AllVariants, Variants, ::testing::ValuesIn(kVariants),
                         [](const auto &info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

TEST(CnnModel, SaturatedCfaEqualsUnconditionedModel) {
  const auto words = word_list(15);
  const EmbeddingTable emb = make_table(words, 8);
  for (const std::string head : {"concat", "attention"}) {
    CnnModel plain(tiny_config(head), emb, 51);
    CnnModel cond(tiny_config(head + "-cfa"), emb, 52);
    for (auto &[name, t] : cond.params()) {
      if (name.find(".cfa.") != std::string::npos) {
        const bool gamma = name.find("gamma") != std::string::npos;
        const bool bias = name.ends_with(".bias");
        std::fill(t.mutable_data().begin(), t.mutable_data().end(),
                  bias ? (gamma ? 1000.0 : -1000.0) : 0.0);
      } else {
        const Tensor *src = find_param(plain.params(), name);
        ASSERT_NE(src, nullptr) << name;
        std::copy(src->values().begin(), src->values().end(), t.mutable_data().begin());
      }
    }
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      const LFKExample ex = random_example(rng, words, 1, 9);
      Tape off(false);
      EXPECT_EQ(plain.forward(off, ex, Mode::kEval).values(),
                cond.forward(off, ex, Mode::kEval).values());
    }
  }
}

TEST(CnnModel, AttentionWeightsFormADistribution) {
  const auto words = word_list(15);
  const EmbeddingTable emb = make_table(words, 8);
  const CnnModel model(tiny_config("attention-cfa"), emb, 61);
  Rng rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const LFKExample ex = random_example(rng, words, 1, 12);
    ForwardTrace trace;
    Tape off(false);
    model.forward(off, ex, Mode::kEval, nullptr, &trace);
    ASSERT_EQ(trace.alpha.size(), ex.tokens.size());
    double s = 0;
    for (double a : trace.alpha) {
      EXPECT_GE(a, 0.0);
      s += a;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(trace.gammas.size(), 2u);
  }
}

TEST(CnnModel, CfaLastLayerCanBeDisabled) {
  ModelConfig cfg = tiny_config("concat-cfa");
  cfg.cfa_last_layer = false;
  const CnnModel model(cfg, make_table(word_list(3), 8), 1);
  EXPECT_NE(find_param(const_cast<NamedParams &>(model.params()), "layer0.cfa.gamma.weight"), nullptr);
  EXPECT_EQ(find_param(const_cast<NamedParams &>(model.params()), "layer1.cfa.gamma.weight"), nullptr);
}

TEST(CnnModel, TrainModeDropoutNeedsStreamAndIsReproducible) {
  const auto words = word_list(10);
  const EmbeddingTable emb = make_table(words, 8);
  ModelConfig cfg = tiny_config("concat");
  cfg.dropout = 0.5;
  const CnnModel model(cfg, emb, 71);
  Rng rng(72);
  const LFKExample ex = random_example(rng, words, 4, 6);
  Tape off(false);
  EXPECT_THROW(model.forward(off, ex, Mode::kTrain), ContractError);
  Rng a(5), b(5);
  EXPECT_EQ(model.forward(off, ex, Mode::kTrain, &a).values(),
            model.forward(off, ex, Mode::kTrain, &b).values());
}

TEST(CnnModel, FinetunedWordsAreTrainable) {
  const auto words = word_list(6);
  const EmbeddingTable emb = make_table(words, 8);
  ModelConfig cfg = tiny_config("attention");
  cfg.finetune_words = true;
  CnnModel model(cfg, emb, 81);
  model.set_finetune_vocab(words);
  ASSERT_NE(find_param(model.params(), "words.table"), nullptr);
  Rng rng(82);
  std::vector<LFKExample> batch = {random_example(rng, words, 4, 4)};
  auto loss = [&](Tape &tape) {
    return ad::cross_entropy(tape, model.forward(tape, batch[0], Mode::kEval), batch[0].label);
  };
  const auto result = ad::gradcheck(loss, {{"words.table", *find_param(model.params(), "words.table")}});
  EXPECT_LT(result.max_rel_error, 1e-4);
}

TEST(ModelConfig, ValidationAndJson) {
  ModelConfig c;
  c.layers = 5;
  EXPECT_THROW(c.validate(), InputError);
  c.layers = 0;
  EXPECT_THROW(c.validate(), InputError);
  EXPECT_THROW(c.set_variant("lstm"), InputError);
  ModelConfig d;
  d.set_variant("attention-cfa");
  d.windows = {3};
  d.cnn_activation = ad::Activation::kRelu;
  const ModelConfig back = ModelConfig::from_json(nlohmann::json::parse(d.to_json().dump()));
  EXPECT_EQ(back.to_json().dump(), d.to_json().dump());
  EXPECT_EQ(back.variant(), "attention-cfa");
}

}  // namespace
}  // namespace lfk
