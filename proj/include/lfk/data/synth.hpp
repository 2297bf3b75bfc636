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

#ifndef LFK_DATA_SYNTH_HPP
#define LFK_DATA_SYNTH_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfk/core/error.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/data/corpus.hpp"

namespace lfk {

// Shape of a synthetic, license-free stand-in for an annotated event corpus.
struct SynthSpec {
  struct TypeSpec {
    std::string name;
    std::vector<std::string> subtypes;
  };

  std::vector<TypeSpec> types = {
      {"Conflict", {"Attack", "Demonstrate", "Clash"}},
      {"Life", {"Be-Born", "Die", "Marry"}},
  };
  std::size_t triggers_per_subtype = 6;
  std::size_t context_words_per_subtype = 8;
  std::size_t filler_words = 80;
  std::size_t train_sentences = 600;
  std::size_t dev_sentences = 200;
  std::size_t test_sentences = 200;
  std::size_t sentences_per_document = 10;
  double event_fraction = 0.6;
  std::size_t min_length = 8;
  std::size_t max_length = 14;
  std::size_t embedding_dim = 50;

  void validate() const {
    if (types.size() < 2) throw InputError("synth spec: need at least 2 types");
    for (const auto &t : types) {
      if (t.subtypes.size() < 2) {
        throw InputError("synth spec: type '" + t.name + "' needs at least 2 subtypes");
      }
    }
    if (triggers_per_subtype < 6) throw InputError("synth spec: need at least 6 triggers per subtype");
    if (context_words_per_subtype < 1 || filler_words < 4) {
      throw InputError("synth spec: need context words and at least 4 filler words");
    }
    if (train_sentences == 0 || dev_sentences == 0 || test_sentences == 0) {
      throw InputError("synth spec: every split needs at least one sentence");
    }
    if (sentences_per_document == 0) throw InputError("synth spec: sentences_per_document must be positive");
    if (event_fraction < 0.0 || event_fraction > 1.0) {
      throw InputError("synth spec: event_fraction must lie in [0, 1]");
    }
    if (min_length < 5 || max_length < min_length) {
      throw InputError("synth spec: need 5 <= min_length <= max_length");
    }
    if (embedding_dim == 0) throw InputError("synth spec: embedding_dim must be positive");
  }

  static SynthSpec from_json(const nlohmann::json &j) {
    SynthSpec s;
    try {
      if (j.contains("types")) {
        s.types.clear();
        for (const auto &t : j.at("types")) {
          s.types.push_back({t.at("name").get<std::string>(),
                             t.at("subtypes").get<std::vector<std::string>>()});
        }
      }
      s.triggers_per_subtype = j.value("triggers_per_subtype", s.triggers_per_subtype);
      s.context_words_per_subtype = j.value("context_words_per_subtype", s.context_words_per_subtype);
      s.filler_words = j.value("filler_words", s.filler_words);
      if (j.contains("sentences")) {
        const auto &n = j.at("sentences");
        s.train_sentences = n.value("train", s.train_sentences);
        s.dev_sentences = n.value("dev", s.dev_sentences);
        s.test_sentences = n.value("test", s.test_sentences);
      }
      s.sentences_per_document = j.value("sentences_per_document", s.sentences_per_document);
      s.event_fraction = j.value("event_fraction", s.event_fraction);
      s.min_length = j.value("min_length", s.min_length);
      s.max_length = j.value("max_length", s.max_length);
      s.embedding_dim = j.value("embedding_dim", s.embedding_dim);
    } catch (const nlohmann::json::exception &e) {
      throw InputError(std::string("synth spec: ") + e.what());
    }
    s.validate();
    return s;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["types"] = nlohmann::ordered_json::array();
    for (const auto &t : types) j["types"].push_back({{"name", t.name}, {"subtypes", t.subtypes}});
    j["triggers_per_subtype"] = triggers_per_subtype;
    j["context_words_per_subtype"] = context_words_per_subtype;
    j["filler_words"] = filler_words;
    j["sentences"] = {{"train", train_sentences}, {"dev", dev_sentences}, {"test", test_sentences}};
    j["sentences_per_document"] = sentences_per_document;
    j["event_fraction"] = event_fraction;
    j["min_length"] = min_length;
    j["max_length"] = max_length;
    j["embedding_dim"] = embedding_dim;
    return j;
  }
};

struct SynthResult {
  Corpus train;
  Corpus dev;
  Corpus test;
  TriggerLexicon lexicon;
  TypeMap type_map;
  // Word vectors for every generated token; triggers share an "event"
  // direction plus type and subtype directions, so an unseen type's triggers
  // still look like triggers.
  std::map<std::string, std::vector<double>> embeddings;
};

namespace detail {

inline std::string word_stem(const std::string &subtype) {
  std::string out;
  for (char c : to_lower(subtype)) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

inline std::vector<double> random_direction(std::size_t dim, Rng &rng) {
  std::vector<double> v(dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double &x : v) x = rng.normal() * s;
  return v;
}

}  // namespace detail

// Template sentences: an event sentence holds one trigger of its subtype amid
// that subtype's context words and filler, plus one "Other" anchor at least
// three tokens away from the trigger when the sentence allows it. Non-event
// sentences hold filler with occasional context words and two "Other" anchors.
inline SynthResult synth_corpus(const SynthSpec &spec, std::uint64_t seed) {
  spec.validate();
  const Rng root = Rng(seed).substream("synth");
  SynthResult out;

  struct SubInfo {
    std::string name;
    std::string type;
    std::vector<std::string> triggers;
    std::vector<std::string> context;
  };
  std::vector<SubInfo> subs;
  for (const auto &t : spec.types) {
    out.type_map.types.push_back(t.name);
    for (const auto &s : t.subtypes) {
      if (out.type_map.subtype_of.count(s)) throw InputError("synth spec: duplicate subtype '" + s + "'");
      out.type_map.subtype_of[s] = t.name;
      SubInfo info{s, t.name, {}, {}};
      const std::string stem = detail::word_stem(s);
      for (std::size_t k = 0; k < spec.triggers_per_subtype; ++k)
        info.triggers.push_back(stem + "_t" + std::to_string(k));
      for (std::size_t k = 0; k < spec.context_words_per_subtype; ++k)
        info.context.push_back(stem + "_c" + std::to_string(k));
      for (const auto &w : info.triggers) out.lexicon.add(s, w);
      subs.push_back(std::move(info));
    }
  }
  std::vector<std::string> filler;
  for (std::size_t k = 0; k < spec.filler_words; ++k) filler.push_back("w" + std::to_string(k));

  {
    Rng rng = root.substream("embeddings");
    const std::size_t d = spec.embedding_dim;
    const auto event_dir = detail::random_direction(d, rng);
    const auto context_dir = detail::random_direction(d, rng);
    const auto filler_dir = detail::random_direction(d, rng);
    std::map<std::string, std::vector<double>> type_dir;
    for (const auto &t : spec.types) type_dir[t.name] = detail::random_direction(d, rng);
    auto combine = [&](std::initializer_list<std::pair<double, const std::vector<double> *>> parts,
                       double noise) {
      std::vector<double> v(d, 0.0);
      for (const auto &[w, dir] : parts)
        for (std::size_t i = 0; i < d; ++i) v[i] += w * (*dir)[i];
      const auto n = detail::random_direction(d, rng);
      for (std::size_t i = 0; i < d; ++i) v[i] += noise * n[i];
      return v;
    };
    for (const auto &s : subs) {
      const auto sub_dir = detail::random_direction(d, rng);
      const auto &tdir = type_dir[s.type];
      for (const auto &w : s.triggers)
        out.embeddings[w] = combine({{1.0, &event_dir}, {0.15, &tdir}, {0.15, &sub_dir}}, 0.2);
      for (const auto &w : s.context)
        out.embeddings[w] = combine({{1.0, &context_dir}, {0.15, &tdir}, {0.15, &sub_dir}}, 0.2);
    }
    for (const auto &w : filler) out.embeddings[w] = combine({{1.0, &filler_dir}}, 0.6);
  }

  auto make_split = [&](const std::string &name, std::size_t count) {
    Rng rng = root.substream(name);
    Corpus c;
    for (std::size_t i = 0; i < count; ++i) {
      if (i % spec.sentences_per_document == 0) {
        char id[64];
        std::snprintf(id, sizeof(id), "%s-%04zu", name.c_str(), i / spec.sentences_per_document);
        c.documents.push_back(Document{id, {}});
      }
      const std::size_t len =
          spec.min_length + rng.below(spec.max_length - spec.min_length + 1);
      Sentence s;
      s.tokens.resize(len);
      if (rng.bernoulli(spec.event_fraction)) {
        const SubInfo &sub = subs[rng.below(subs.size())];
        const std::size_t p = rng.below(len);
        for (std::size_t k = 0; k < len; ++k) {
          s.tokens[k] = rng.bernoulli(0.5) ? sub.context[rng.below(sub.context.size())]
                                           : filler[rng.below(filler.size())];
        }
        s.tokens[p] = sub.triggers[rng.below(sub.triggers.size())];
        s.mentions.push_back({p, sub.name});
        std::vector<std::size_t> far;
        for (std::size_t k = 0; k < len; ++k)
          if (k + 3 <= p || k >= p + 3) far.push_back(k);
        if (far.empty()) {
          for (std::size_t k = 0; k < len; ++k)
            if (k != p) far.push_back(k);
        }
        s.mentions.push_back({far[rng.below(far.size())], kOtherSubtype});
      } else {
        for (std::size_t k = 0; k < len; ++k) {
          if (rng.bernoulli(0.2)) {
            const SubInfo &sub = subs[rng.below(subs.size())];
            s.tokens[k] = sub.context[rng.below(sub.context.size())];
          } else {
            s.tokens[k] = filler[rng.below(filler.size())];
          }
        }
        const std::size_t a = rng.below(len);
        std::size_t b = rng.below(len - 1);
        if (b >= a) ++b;
        s.mentions.push_back({std::min(a, b), kOtherSubtype});
        s.mentions.push_back({std::max(a, b), kOtherSubtype});
      }
      c.documents.back().sentences.push_back(std::move(s));
    }
    return c;
  };
  out.train = make_split("train", spec.train_sentences);
  out.dev = make_split("dev", spec.dev_sentences);
  out.test = make_split("test", spec.test_sentences);
  return out;
}

}  // namespace lfk

#endif  // LFK_DATA_SYNTH_HPP
