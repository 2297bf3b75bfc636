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

#include <filesystem>
#include <fstream>

#include "lfk/encoding/embeddings.hpp"
#include "lfk/encoding/encoding.hpp"
#include "test_util.hpp"

namespace lfk {
namespace {

namespace fs = std::filesystem;
using testing::make_table;
using testing::max_rel_error;
using testing::numeric_grad;
using testing::word_list;

fs::path write_tmp(const std::string &name, const std::string &body) {
  const fs::path dir = fs::temp_directory_path() / "lfk_test_encoding";
  fs::create_directories(dir);
  std::ofstream(dir / name) << body;
  return dir / name;
}

// -- embeddings ---------------------------------------------------------------

TEST(Embeddings, LoadsTextFormatWithOptionalHeader) {
  const auto p = write_tmp("ok.txt", "2 3\nfoo 1 2 3\nbar -1.5 0 2.5e-1\n");
  const EmbeddingTable t = load_embeddings(p.string(), 3);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.lookup("bar"), (std::vector<double>{-1.5, 0.0, 0.25}));
}

TEST(Embeddings, DimensionIsDetectedWhenZero) {
  const auto plain = write_tmp("plain.txt", "foo 1 2 3 4\n");
  const auto header = write_tmp("header.txt", "1 2\nfoo 1 2\n");
  EXPECT_EQ(detect_embedding_dim(plain.string()), 4u);
  EXPECT_EQ(load_embeddings(header.string(), 0).dim(), 2u);
}

TEST(Embeddings, WrongValueCountNamesLine) {
  const auto p = write_tmp("short.txt", "foo 1 2 3\nbar 1 2\n");
  try {
    load_embeddings(p.string(), 3);
    FAIL() << "expected InputError";
  } catch (const InputError &e) {
    EXPECT_NE(std::string(e.what()).find("short.txt:2:"), std::string::npos) << e.what();
  }
}

TEST(Embeddings, MalformedNumberIsParseError) {
  const auto p = write_tmp("nan.txt", "foo 1 x 3\n");
  EXPECT_THROW(load_embeddings(p.string(), 3), ParseError);
}

TEST(Embeddings, DuplicateTokenWarnsAndLastWins) {
  const auto p = write_tmp("dup.txt", "foo 1 1\nfoo 2 2\n");
  std::vector<std::string> warnings;
  auto saved = warning_handler();
  warning_handler() = [&](const std::string &m) { warnings.push_back(m); };
  const EmbeddingTable t = load_embeddings(p.string(), 2);
  warning_handler() = saved;
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(t.lookup("foo"), (std::vector<double>{2.0, 2.0}));
}

TEST(Embeddings, OovZeroPolicy) {
  EmbeddingTable t(4, OovPolicy::kZero);
  EXPECT_EQ(t.lookup("missing"), std::vector<double>(4, 0.0));
}

TEST(Embeddings, OovRandomFixedIsStablePerTokenAndBounded) {
  EmbeddingTable a(8, OovPolicy::kRandomFixed, 11), b(8, OovPolicy::kRandomFixed, 11);
  a.set("known", std::vector<double>(8, 1.0));
  const auto v = a.lookup("zzz");
  EXPECT_EQ(v, b.lookup("zzz"));
  EXPECT_EQ(v, a.lookup("zzz"));
  EXPECT_NE(v, a.lookup("yyy"));
  for (double x : v) EXPECT_LE(std::abs(x), 0.25);
}

TEST(Embeddings, WriteThenLoadIsExact) {
  std::map<std::string, std::vector<double>> vecs = {{"a", {0.1, 1.0 / 3.0}}, {"b", {-2e-17, 5}}};
  const fs::path p = fs::temp_directory_path() / "lfk_test_encoding" / "rt.txt";
  write_embeddings(vecs, p.string());
  const EmbeddingTable t = load_embeddings(p.string(), 2);
  for (const auto &[w, v] : vecs) EXPECT_EQ(t.lookup(w), v);
}

TEST(Embeddings, WrongDimensionVectorRejected) {
  EmbeddingTable t(3);
  EXPECT_THROW(t.set("x", {1.0}), InputError);
}

// -- encode -----------------------------------------------------------------------

TEST(Encode, RowIsPositionThenWordVector) {
  const auto words = word_list(5);
  const EmbeddingTable emb = make_table(words, 3);
  PositionTable pos(2, 4);
  Rng rng(5);
  for (double &v : pos.table().mutable_data()) v = rng.uniform(-1, 1);
  const std::vector<std::string> toks = {"w0", "w3", "w1", "w4"};
  const auto enc = encode(toks, 1, emb, pos);
  ASSERT_EQ(enc.h0.shape(), (Shape{4, 5}));
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::size_t prow = static_cast<std::size_t>(static_cast<int>(i) - 1 + 4);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(enc.h0.at(i, j), pos.table().at(prow, j));
    const auto wv = emb.lookup(toks[i]);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(enc.h0.at(i, 2 + j), wv[j]);
  }
}

TEST(Encode, OffsetsBeyondRangeAreClamped) {
  PositionTable pos(1, 30);
  for (std::size_t r = 0; r < 61; ++r) pos.table().at(r, 0) = static_cast<double>(r) - 30.0;
  const EmbeddingTable emb(2, OovPolicy::kZero);
  const std::vector<std::string> toks(50, "t");
  const auto enc = encode(toks, 0, emb, pos);
  EXPECT_EQ(enc.h0.at(0, 0), 0.0);
  EXPECT_EQ(enc.h0.at(30, 0), 30.0);
  EXPECT_EQ(enc.h0.at(49, 0), 30.0);
  const auto back = encode(toks, 49, emb, pos);
  EXPECT_EQ(back.h0.at(0, 0), -30.0);
  EXPECT_EQ(pos.row_of(-100), 0u);
}

TEST(Encode, EmptySentenceAndBadAnchorRejected) {
  const EmbeddingTable emb(2);
  PositionTable pos(1, 3);
  EXPECT_THROW(encode({}, 0, emb, pos), InputError);
  EXPECT_THROW(encode({"a"}, 1, emb, pos), InputError);
}

TEST(Encode, PositionGradientFlowsOnlyToUsedRows) {
  const EmbeddingTable emb = make_table(word_list(3), 2);
  PositionTable pos(2, 5);
  Tape tape;
  const auto enc = encode(tape, {"w0", "w1", "w2"}, 0, WordEncoder(emb), pos);
  tape.backward(ad::sum(tape, enc.h0));
  const auto g = pos.table().grad();
  for (std::size_t r = 0; r < 11; ++r) {
    const bool used = r >= 5 && r <= 7;
    EXPECT_EQ(g[r * 2], used ? 1.0 : 0.0) << r;
  }
}

// -- keyword representation ----------------------------------------------------------

TEST(KeywordRepr, IdenticalVectorsGiveThatVector) {
  EmbeddingTable emb(3);
  for (const char *w : {"a", "b", "c", "d"}) emb.set(w, {1.0, -2.0, 0.5});
  const Tensor v = keyword_repr({"a", "b", "c", "d"}, emb);
  EXPECT_EQ(v.values(), (std::vector<double>{1.0, -2.0, 0.5}));
}

TEST(KeywordRepr, OovUnderZeroPolicyCountsInDenominator) {
  EmbeddingTable emb(2, OovPolicy::kZero);
  for (const char *w : {"a", "b", "c"}) emb.set(w, {4.0, 8.0});
  const Tensor v = keyword_repr({"a", "b", "c", "zzz"}, emb);
  EXPECT_DOUBLE_EQ(v[0], 3.0);
  EXPECT_DOUBLE_EQ(v[1], 6.0);
}

TEST(KeywordRepr, EmptySetRejected) {
  EXPECT_THROW(keyword_repr({}, EmbeddingTable(2)), InputError);
}

TEST(KeywordRepr, MatchesLoopOracleAndIsPermutationInvariant) {
  const auto words = word_list(30);
  const EmbeddingTable emb = make_table(words, 7, 3);
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> k;
    for (int i = 0; i < 4; ++i) k.push_back(words[rng.below(words.size())]);
    std::vector<double> oracle(7, 0.0);
    for (const auto &w : k) {
      const auto v = emb.lookup(w);
      for (std::size_t j = 0; j < 7; ++j) oracle[j] += v[j];
    }
    for (double &x : oracle) x /= 4.0;
    const Tensor got = keyword_repr(k, emb);
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(got[j], oracle[j], 1e-12);
    std::vector<std::string> perm = k;
    rng.shuffle(perm);
    const Tensor again = keyword_repr(perm, emb);
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(again[j], got[j], 1e-12);
  }
}

// -- fine-tuning ----------------------------------------------------------------------

TEST(WordEncoder, FrozenByDefaultHasNoGradient) {
  const EmbeddingTable emb = make_table(word_list(3), 2);
  WordEncoder enc(emb);
  Tape tape;
  const Tensor r = enc.rows(tape, {"w0", "w1"});
  EXPECT_FALSE(r.requires_grad());
  EXPECT_FALSE(enc.finetuned());
}

TEST(WordEncoder, FinetuneGradientMatchesFiniteDifferences) {
  const EmbeddingTable emb = make_table(word_list(4), 3);
  WordEncoder enc(emb);
  enc.enable_finetune({"w1", "w0", "w2"});
  const std::vector<std::string> toks = {"w0", "w1", "oov", "w0", "w3"};
  Rng rng(2);
  const Tensor weights = testing::random_tensor({5, 3}, rng, -1, 1, false);
  auto loss = [&](Tape &tape) { return ad::sum(tape, ad::mul(tape, enc.rows(tape, toks), weights)); };
  Tape tape;
  tape.backward(loss(tape));
  Tensor &table = enc.trainable_table();
  const std::vector<double> analytic(table.grad().begin(), table.grad().end());
  const auto numeric = numeric_grad([&] { Tape off(false); return loss(off).item(); }, table);
  EXPECT_LT(max_rel_error(analytic, numeric), 1e-6);
  // Row for w2 is never used.
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(analytic[2 * 3 + j], 0.0);
}

}  // namespace
}  // namespace lfk
