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

#ifndef LFK_DATA_CORPUS_HPP
#define LFK_DATA_CORPUS_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "lfk/core/error.hpp"

namespace lfk {

inline constexpr const char *kOtherSubtype = "Other";

struct EventMention {
  std::size_t anchor = 0;
  std::string subtype;

  bool is_other() const { return subtype == kOtherSubtype; }
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<EventMention> mentions;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
};

struct Corpus {
  std::vector<Document> documents;

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto &d : documents) n += d.sentences.size();
    return n;
  }

  std::size_t mention_count() const {
    std::size_t n = 0;
    for (const auto &d : documents)
      for (const auto &s : d.sentences) n += s.mentions.size();
    return n;
  }
};

// Two-level label hierarchy: each subtype belongs to exactly one type.
struct TypeMap {
  std::vector<std::string> types;
  std::map<std::string, std::string> subtype_of;

  bool has_type(const std::string &t) const {
    return std::find(types.begin(), types.end(), t) != types.end();
  }

  // Subtypes of `type`, sorted.
  std::vector<std::string> subtypes_of(const std::string &type) const {
    std::vector<std::string> out;
    for (const auto &[sub, t] : subtype_of)
      if (t == type) out.push_back(sub);
    return out;
  }

  std::vector<std::string> all_subtypes() const {
    std::vector<std::string> out;
    for (const auto &kv : subtype_of) out.push_back(kv.first);
    return out;
  }

  void validate() const {
    for (const auto &[sub, t] : subtype_of) {
      if (sub == kOtherSubtype) throw InputError("type map: \"Other\" must not be a subtype key");
      if (!has_type(t)) {
        throw InputError("type map: subtype '" + sub + "' maps to unknown type '" + t + "'");
      }
    }
  }
};

inline std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Trigger words per subtype, lowercase, sorted and deduplicated.
struct TriggerLexicon {
  std::map<std::string, std::vector<std::string>> triggers;

  void add(const std::string &subtype, const std::string &word) {
    auto &v = triggers[subtype];
    const std::string w = to_lower(word);
    auto it = std::lower_bound(v.begin(), v.end(), w);
    if (it == v.end() || *it != w) v.insert(it, w);
  }

  const std::vector<std::string> &words(const std::string &subtype) const {
    static const std::vector<std::string> empty;
    auto it = triggers.find(subtype);
    return it == triggers.end() ? empty : it->second;
  }
};

// Which mention produced an example and which subtype its keywords came from.
struct Provenance {
  std::string mention_subtype;
  std::string keyword_subtype;
};

struct LFKExample {
  std::vector<std::string> tokens;
  std::size_t anchor = 0;
  std::vector<std::string> keywords;  // sorted
  int label = 0;
  std::optional<Provenance> provenance;

  const std::string &anchor_word() const { return tokens.at(anchor); }

  void validate() const {
    if (tokens.empty()) throw InputError("example has no tokens");
    if (anchor >= tokens.size()) {
      throw InputError("example anchor " + std::to_string(anchor) + " out of range for " +
                       std::to_string(tokens.size()) + " tokens");
    }
    if (keywords.empty()) throw InputError("example has an empty keyword set");
    if (label != 0 && label != 1) throw InputError("example label must be 0 or 1");
  }
};

// Collects 𝒦 from annotated mentions: anchor word of every non-Other mention.
inline TriggerLexicon collect_lexicon(const Corpus &corpus) {
  TriggerLexicon lex;
  for (const auto &d : corpus.documents)
    for (const auto &s : d.sentences)
      for (const auto &m : s.mentions)
        if (!m.is_other()) lex.add(m.subtype, s.tokens.at(m.anchor));
  return lex;
}

// Every mention must be "Other" or a subtype known to the type map.
inline void validate_corpus(const Corpus &corpus, const TypeMap &types) {
  for (const auto &d : corpus.documents)
    for (const auto &s : d.sentences)
      for (const auto &m : s.mentions) {
        if (m.anchor >= s.tokens.size()) {
          throw InputError("document '" + d.id + "': anchor " + std::to_string(m.anchor) +
                           " out of range");
        }
        if (!m.is_other() && !types.subtype_of.count(m.subtype)) {
          throw InputError("document '" + d.id + "': subtype '" + m.subtype +
                           "' missing from type map");
        }
      }
}

// ---------------------------------------------------------------------------
// File formats

namespace io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

inline json parse_json_file(const std::string &path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error &e) {
    throw ParseError(path, 1, e.what());
  }
}

// Calls fn(json, line_number) for each non-blank line.
template <class Fn>
void for_each_jsonl(const std::string &path, Fn &&fn) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(path, lineno, e.what());
    }
    try {
      fn(j, lineno);
    } catch (const ParseError &) {
      throw;
    } catch (const json::exception &e) {
      throw ParseError(path, lineno, e.what());
    } catch (const InputError &e) {
      throw ParseError(path, lineno, e.what());
    }
  }
}

// One sentence per line: {"doc", "tokens", "mentions": [{"anchor", "subtype"}]}.
// Sentences of a document are grouped in order of first appearance.
inline Corpus read_corpus(const std::string &path) {
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> doc_index;
  for_each_jsonl(path, [&](const json &j, std::size_t) {
    Sentence s;
    s.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (s.tokens.empty()) throw InputError("sentence has no tokens");
    for (const auto &m : j.value("mentions", json::array())) {
      EventMention em;
      const long anchor = m.at("anchor").get<long>();
      if (anchor < 0 || static_cast<std::size_t>(anchor) >= s.tokens.size()) {
        throw InputError("mention anchor " + std::to_string(anchor) + " outside sentence of " +
                         std::to_string(s.tokens.size()) + " tokens");
      }
      em.anchor = static_cast<std::size_t>(anchor);
      em.subtype = m.at("subtype").get<std::string>();
      s.mentions.push_back(std::move(em));
    }
    const std::string doc = j.at("doc").get<std::string>();
    auto it = doc_index.find(doc);
    if (it == doc_index.end()) {
      it = doc_index.emplace(doc, corpus.documents.size()).first;
      corpus.documents.push_back(Document{doc, {}});
    }
    corpus.documents[it->second].sentences.push_back(std::move(s));
  });
  return corpus;
}

inline void write_corpus(const Corpus &corpus, const std::string &path) {
  auto out = open_out(path);
  for (const auto &d : corpus.documents) {
    for (const auto &s : d.sentences) {
      ordered_json j;
      j["doc"] = d.id;
      j["tokens"] = s.tokens;
      j["mentions"] = ordered_json::array();
      for (const auto &m : s.mentions) {
        j["mentions"].push_back(ordered_json{{"anchor", m.anchor}, {"subtype", m.subtype}});
      }
      out << j.dump() << '\n';
    }
  }
}

inline TypeMap read_type_map(const std::string &path) {
  const json j = parse_json_file(path);
  TypeMap tm;
  try {
    tm.types = j.at("types").get<std::vector<std::string>>();
    tm.subtype_of = j.at("subtype_of").get<std::map<std::string, std::string>>();
  } catch (const json::exception &e) {
    throw ParseError(path, 1, e.what());
  }
  tm.validate();
  return tm;
}

inline void write_type_map(const TypeMap &tm, const std::string &path) {
  ordered_json j;
  j["types"] = tm.types;
  j["subtype_of"] = tm.subtype_of;
  open_out(path) << j.dump(2) << '\n';
}

inline TriggerLexicon read_lexicon(const std::string &path) {
  const json j = parse_json_file(path);
  TriggerLexicon lex;
  try {
    for (const auto &[sub, words] : j.items()) {
      for (const auto &w : words) lex.add(sub, w.get<std::string>());
    }
  } catch (const json::exception &e) {
    throw ParseError(path, 1, e.what());
  }
  return lex;
}

inline void write_lexicon(const TriggerLexicon &lex, const std::string &path) {
  ordered_json j = ordered_json::object();
  for (const auto &[sub, words] : lex.triggers) j[sub] = words;
  open_out(path) << j.dump(2) << '\n';
}

inline ordered_json example_to_json(const LFKExample &ex) {
  ordered_json j;
  j["tokens"] = ex.tokens;
  j["anchor"] = ex.anchor;
  j["keywords"] = ex.keywords;
  j["label"] = ex.label;
  if (ex.provenance) {
    j["provenance"] = ordered_json{{"mention_subtype", ex.provenance->mention_subtype},
                                   {"keyword_subtype", ex.provenance->keyword_subtype}};
  }
  return j;
}

inline LFKExample example_from_json(const json &j) {
  LFKExample ex;
  ex.tokens = j.at("tokens").get<std::vector<std::string>>();
  const long anchor = j.at("anchor").get<long>();
  if (anchor < 0) throw InputError("negative anchor");
  ex.anchor = static_cast<std::size_t>(anchor);
  ex.keywords = j.at("keywords").get<std::vector<std::string>>();
  std::sort(ex.keywords.begin(), ex.keywords.end());
  ex.label = j.at("label").get<int>();
  if (j.contains("provenance")) {
    const auto &p = j.at("provenance");
    ex.provenance = Provenance{p.at("mention_subtype").get<std::string>(),
                               p.at("keyword_subtype").get<std::string>()};
  }
  ex.validate();
  return ex;
}

inline std::vector<LFKExample> read_examples(const std::string &path) {
  std::vector<LFKExample> out;
  for_each_jsonl(path, [&](const json &j, std::size_t) { out.push_back(example_from_json(j)); });
  return out;
}

inline void write_examples(const std::vector<LFKExample> &examples, const std::string &path) {
  auto out = open_out(path);
  for (const auto &ex : examples) out << example_to_json(ex).dump() << '\n';
}

}  // namespace io
}  // namespace lfk

#endif  // LFK_DATA_CORPUS_HPP
