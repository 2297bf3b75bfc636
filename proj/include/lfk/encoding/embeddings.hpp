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

#ifndef LFK_ENCODING_EMBEDDINGS_HPP
#define LFK_ENCODING_EMBEDDINGS_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lfk/core/error.hpp"
#include "lfk/core/rng.hpp"

namespace lfk {

enum class OovPolicy { kZero, kRandomFixed };

inline std::string to_string(OovPolicy p) {
  return p == OovPolicy::kZero ? "zero" : "random-fixed";
}

inline OovPolicy parse_oov_policy(const std::string &s) {
  if (s == "zero") return OovPolicy::kZero;
  if (s == "random-fixed") return OovPolicy::kRandomFixed;
  throw InputError("unknown OOV policy '" + s + "' (expected zero or random-fixed)");
}

// Immutable token -> vector map. Out-of-vocabulary tokens get either a zero
// vector or a vector drawn from a stream keyed by (seed, token), so lookups
// never mutate the table and repeat exactly.
class EmbeddingTable {
 public:
  static constexpr double kOovRange = 0.25;

  EmbeddingTable(std::size_t dim, OovPolicy policy = OovPolicy::kRandomFixed,
                 std::uint64_t oov_seed = 0)
      : dim_(dim), policy_(policy), oov_seed_(oov_seed) {
    if (dim == 0) throw InputError("embedding dimension must be positive");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  OovPolicy oov_policy() const { return policy_; }
  std::uint64_t oov_seed() const { return oov_seed_; }
  const std::vector<std::string> &tokens() const { return tokens_; }

  bool contains(const std::string &token) const { return index_.count(token) != 0; }

  // Inserts or replaces; returns false when an existing vector was replaced.
  bool set(const std::string &token, const std::vector<double> &vec) {
    if (vec.size() != dim_) {
      throw InputError("vector for '" + token + "' has " + std::to_string(vec.size()) +
                       " values, expected " + std::to_string(dim_));
    }
    auto it = index_.find(token);
    if (it != index_.end()) {
      std::copy(vec.begin(), vec.end(), data_.begin() + it->second * dim_);
      return false;
    }
    index_.emplace(token, tokens_.size());
    tokens_.push_back(token);
    data_.insert(data_.end(), vec.begin(), vec.end());
    return true;
  }

  void lookup_into(const std::string &token, double *out) const {
    auto it = index_.find(token);
    if (it != index_.end()) {
      std::copy_n(data_.begin() + it->second * dim_, dim_, out);
      return;
    }
    if (policy_ == OovPolicy::kZero) {
      std::fill_n(out, dim_, 0.0);
      return;
    }
    Rng rng(derive_seed(oov_seed_, token));
    for (std::size_t i = 0; i < dim_; ++i) out[i] = rng.uniform(-kOovRange, kOovRange);
  }

  std::vector<double> lookup(const std::string &token) const {
    std::vector<double> v(dim_);
    lookup_into(token, v.data());
    return v;
  }

 private:
  std::size_t dim_;
  OovPolicy policy_;
  std::uint64_t oov_seed_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_double(std::string_view s, double &out) {
  const char *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline bool is_integer(std::string_view s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

}  // namespace detail

// Vector width of an embeddings file, from its header or first vector line.
inline std::size_t detect_embedding_dim(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embeddings '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() == 2 && detail::is_integer(fields[0]) && detail::is_integer(fields[1])) {
      return std::stoul(std::string(fields[1]));
    }
    if (fields.size() < 2) throw ParseError(path, 1, "expected a token followed by values");
    return fields.size() - 1;
  }
  throw InputError("embeddings '" + path + "' contain no vectors");
}

// Reads the word2vec text format: one "token v1 ... v_dim" line per word. A
// leading "<count> <dim>" header line is accepted and skipped. Duplicate
// tokens keep the last vector. A `dim` of 0 takes the width from the file.
inline EmbeddingTable load_embeddings(const std::string &path, std::size_t dim,
                                      OovPolicy policy = OovPolicy::kRandomFixed,
                                      std::uint64_t oov_seed = 0) {
  if (dim == 0) dim = detect_embedding_dim(path);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embeddings '" + path + "'");
  EmbeddingTable table(dim, policy, oov_seed);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> vec(dim);
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (lineno == 1 && fields.size() == 2 && dim != 1 && detail::is_integer(fields[0]) &&
        detail::is_integer(fields[1])) {
      continue;
    }
    if (fields.size() < 2) throw ParseError(path, lineno, "expected a token followed by values");
    if (fields.size() - 1 != dim) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                       " values, found " + std::to_string(fields.size() - 1));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!detail::parse_double(fields[i + 1], vec[i])) {
        throw ParseError(path, lineno, "malformed number '" + std::string(fields[i + 1]) + "'");
      }
    }
    const std::string token(fields[0]);
    if (!table.set(token, vec)) warn(path + ":" + std::to_string(lineno) + ": duplicate token '" + token + "', keeping the last vector");
  }
  if (table.size() == 0) throw InputError("embeddings '" + path + "' contain no vectors");
  return table;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Writes vectors in the text format read by load_embeddings, using the
// shortest representation that round-trips.
inline void write_embeddings(const std::map<std::string, std::vector<double>> &vectors,
                             const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  for (const auto &[token, vec] : vectors) {
    out << token;
    for (double v : vec) out << ' ' << format_double(v);
    out << '\n';
  }
}

}  // namespace lfk

#endif  // LFK_ENCODING_EMBEDDINGS_HPP
