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

// End-to-end use of the library without the command-line tool: build a small
// synthetic corpus, hold out one event type, train Attention-CFA on the rest
// and score it on the held-out type.

#include <cstdio>

#include "lfk/lfk.hpp"

int main() {
  using namespace lfk;

  SynthSpec spec;
  spec.train_sentences = 200;
  spec.dev_sentences = spec.test_sentences = 80;
  const std::uint64_t seed = 7;
  const SynthResult corpus = synth_corpus(spec, seed);

  EmbeddingTable emb(spec.embedding_dim, OovPolicy::kRandomFixed, seed);
  for (const auto &[word, vec] : corpus.embeddings) emb.set(word, vec);

  const std::string target = "Conflict";
  const auto held = holdout_split(corpus.train, corpus.dev, corpus.test, target, corpus.type_map);
  const auto train_set =
      generate_lfk(held.train, corpus.lexicon, corpus.type_map, target, Split::kTrain, seed);
  const auto dev_set = generate_lfk(held.dev, corpus.lexicon, corpus.type_map, target, Split::kDev, seed);
  const auto test_set = generate_lfk(held.test, corpus.lexicon, corpus.type_map, target, Split::kTest, seed);
  std::printf("%s", format_stats_table(target, dataset_stats(train_set), dataset_stats(dev_set),
                                       dataset_stats(test_set))
                        .c_str());

  ModelConfig config;
  config.set_variant("attention-cfa");
  config.filters = 10;
  config.attention_dim = 20;
  config.ffn_hidden = 30;
  CnnModel model(config, emb, seed);

  TrainConfig train_config;
  train_config.max_epochs = 4;
  train_config.seed = seed;
  const TrainResult result = train(model, train_set, dev_set, train_config, [](const EpochLog &log) {
    std::printf("epoch %zu  loss %.4f  dev F1 %s\n", log.epoch, log.train_loss,
                percent1(log.dev_f1).c_str());
  });
  std::printf("best epoch %zu\n", result.best_epoch);
  std::printf("%s", format_report_table(config.variant(), evaluate(model, test_set)).c_str());
  return 0;
}
