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

#ifndef LFK_DATA_DATAGEN_HPP
#define LFK_DATA_DATAGEN_HPP

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lfk/core/error.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/data/corpus.hpp"

namespace lfk {

enum class Split { kTrain, kDev, kTest };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "?";
}

inline constexpr std::size_t kKeywordSetSize = 4;
inline constexpr std::size_t kPositivesPerMention = 5;

namespace detail {

inline void require_target(const TypeMap &types, const std::string &target) {
  if (types.has_type(target)) return;
  std::string valid;
  for (const auto &t : types.types) valid += (valid.empty() ? "" : ", ") + t;
  throw InputError("unknown target type '" + target + "' (valid types: " + valid + ")");
}

template <class Keep>
Corpus filter_mentions(const Corpus &in, Keep keep) {
  Corpus out;
  out.documents.reserve(in.documents.size());
  for (const auto &d : in.documents) {
    Document nd{d.id, {}};
    nd.sentences.reserve(d.sentences.size());
    for (const auto &s : d.sentences) {
      Sentence ns{s.tokens, {}};
      for (const auto &m : s.mentions)
        if (keep(m)) ns.mentions.push_back(m);
      nd.sentences.push_back(std::move(ns));
    }
    out.documents.push_back(std::move(nd));
  }
  return out;
}

// Uniform k-subset of pool (pool must have at least k words), sorted.
inline std::vector<std::string> sample_subset(const std::vector<std::string> &pool, std::size_t k,
                                              Rng &rng) {
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(pool[idx[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

struct HoldoutResult {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Removes the target type's subtypes from train and keeps only target
// subtypes plus "Other" in dev and test. Sentences are always retained.
inline HoldoutResult holdout_split(const Corpus &train, const Corpus &dev, const Corpus &test,
                                   const std::string &target_type, const TypeMap &types) {
  detail::require_target(types, target_type);
  auto in_target = [&](const EventMention &m) {
    if (m.is_other()) return false;
    auto it = types.subtype_of.find(m.subtype);
    return it != types.subtype_of.end() && it->second == target_type;
  };
  auto keep_train = [&](const EventMention &m) { return !in_target(m); };
  auto keep_eval = [&](const EventMention &m) { return m.is_other() || in_target(m); };
  return {detail::filter_mentions(train, keep_train), detail::filter_mentions(dev, keep_eval),
          detail::filter_mentions(test, keep_eval)};
}

// Subtypes negatives may borrow keywords from: every non-target subtype for
// train, the target's subtypes for dev/test. Only subtypes with enough
// trigger words to draw a keyword set qualify.
inline std::vector<std::string> negative_pool(const TriggerLexicon &lexicon, const TypeMap &types,
                                              const std::string &target_type, Split split) {
  std::vector<std::string> pool;
  for (const auto &[sub, type] : types.subtype_of) {
    const bool target = type == target_type;
    if ((split == Split::kTrain) == target) continue;
    if (lexicon.words(sub).size() >= kKeywordSetSize) pool.push_back(sub);
  }
  return pool;
}

// Turns annotated mentions into keyword-matching examples. Each event mention
// yields five positives whose keyword sets are 4-subsets of its subtype's
// triggers minus the anchor word (distinct whenever at least five such subsets
// exist); each "Other" mention yields one negative whose keywords come from a
// uniformly drawn subtype of the split's pool. Every example carries its
// provenance; writers drop it unless asked to keep it.
//
// Documents draw from independent streams keyed by (seed, split, document
// index), so the output only depends on the arguments.
inline std::vector<LFKExample> generate_lfk(const Corpus &corpus, const TriggerLexicon &lexicon,
                                            const TypeMap &types, const std::string &target_type,
                                            Split split, std::uint64_t seed) {
  detail::require_target(types, target_type);
  const std::vector<std::string> pool = negative_pool(lexicon, types, target_type, split);
  const Rng base = Rng(seed).substream("datagen").substream(to_string(split));

  std::vector<LFKExample> out;
  for (std::size_t di = 0; di < corpus.documents.size(); ++di) {
    const Document &doc = corpus.documents[di];
    Rng rng = base.substream(static_cast<std::uint64_t>(di));
    for (const Sentence &s : doc.sentences) {
      for (const EventMention &m : s.mentions) {
        if (m.anchor >= s.tokens.size()) {
          throw InputError("document '" + doc.id + "': anchor out of range");
        }
        if (!m.is_other()) {
          const std::string anchor_word = to_lower(s.tokens[m.anchor]);
          std::vector<std::string> candidates;
          for (const auto &w : lexicon.words(m.subtype))
            if (w != anchor_word) candidates.push_back(w);
          if (candidates.size() < kKeywordSetSize) {
            warn("skipping mention of '" + m.subtype + "' in document '" + doc.id + "': only " +
                 std::to_string(candidates.size()) + " trigger words besides the anchor");
            continue;
          }
          const bool distinct = candidates.size() > kKeywordSetSize;
          std::set<std::vector<std::string>> seen;
          for (std::size_t u = 0; u < kPositivesPerMention; ++u) {
            std::vector<std::string> kw = detail::sample_subset(candidates, kKeywordSetSize, rng);
            while (distinct && seen.count(kw)) {
              kw = detail::sample_subset(candidates, kKeywordSetSize, rng);
            }
            seen.insert(kw);
            out.push_back(LFKExample{s.tokens, m.anchor, std::move(kw), 1,
                                     Provenance{m.subtype, m.subtype}});
          }
        } else {
          if (pool.empty()) {
            throw GenerationError("no subtype available to draw negative keywords for the " +
                                  to_string(split) + " split of target '" + target_type +
                                  "' (each needs at least 4 trigger words)");
          }
          const std::string &sub = pool[rng.below(pool.size())];
          std::vector<std::string> kw =
              detail::sample_subset(lexicon.words(sub), kKeywordSetSize, rng);
          out.push_back(LFKExample{s.tokens, m.anchor, std::move(kw), 0,
                                   Provenance{kOtherSubtype, sub}});
        }
      }
    }
  }
  return out;
}

struct StatsReport {
  std::size_t positives = 0;
  std::size_t negatives = 0;

  std::size_t total() const { return positives + negatives; }
};

inline StatsReport dataset_stats(const std::vector<LFKExample> &examples) {
  StatsReport r;
  for (const auto &ex : examples) (ex.label == 1 ? r.positives : r.negatives)++;
  return r;
}

// Label rows (+1 / -1) against split columns.
inline std::string format_stats_table(const std::string &target_type, const StatsReport &train,
                                      const StatsReport &dev, const StatsReport &test) {
  std::ostringstream os;
  const int w = 10;
  os << std::left << std::setw(14) << "Target" << std::setw(7) << "Label" << std::right
     << std::setw(w) << "Train" << std::setw(w) << "Dev" << std::setw(w) << "Test" << '\n';
  os << std::left << std::setw(14) << target_type << std::setw(7) << "+1" << std::right
     << std::setw(w) << train.positives << std::setw(w) << dev.positives << std::setw(w)
     << test.positives << '\n';
  os << std::left << std::setw(14) << "" << std::setw(7) << "-1" << std::right << std::setw(w)
     << train.negatives << std::setw(w) << dev.negatives << std::setw(w) << test.negatives
     << '\n';
  return os.str();
}

}  // namespace lfk

#endif  // LFK_DATA_DATAGEN_HPP
