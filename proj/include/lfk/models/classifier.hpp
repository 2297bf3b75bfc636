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

#ifndef LFK_MODELS_CLASSIFIER_HPP
#define LFK_MODELS_CLASSIFIER_HPP

#include <concepts>
#include <string>
#include <utility>
#include <vector>

#include "lfk/autodiff/tensor.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/data/corpus.hpp"

namespace lfk {

enum class Mode { kTrain, kEval };

using NamedParams = std::vector<std::pair<std::string, Tensor>>;

// Intermediate values captured during a forward pass, for inspection.
struct ForwardTrace {
  std::vector<double> alpha;                  // attention weights
  std::vector<std::vector<double>> gammas;    // per conditioned layer
  std::vector<std::vector<double>> betas;
  std::vector<double> representation;         // R before dropout
};

// Anything the training loop and evaluator can drive: a named parameter list
// and a forward pass producing two logits.
template <class M>
concept Classifier = requires(M &m, const M &cm, Tape &tape, const LFKExample &ex, Rng *rng,
                              ForwardTrace *trace) {
  { m.params() } -> std::same_as<NamedParams &>;
  { cm.params() } -> std::same_as<const NamedParams &>;
  { cm.forward(tape, ex, Mode::kTrain, rng, trace) } -> std::same_as<Tensor>;
};

inline void init_uniform(Tensor &t, double scale, Rng &rng) {
  for (double &v : t.mutable_data()) v = rng.uniform(-scale, scale);
}

inline Tensor *find_param(NamedParams &params, const std::string &name) {
  for (auto &[n, t] : params)
    if (n == name) return &t;
  return nullptr;
}

inline void zero_grads(NamedParams &params) {
  for (auto &[n, t] : params) t.zero_grad();
}

// Deep copy of parameter values, used for best-epoch snapshots.
inline std::vector<std::vector<double>> snapshot(const NamedParams &params) {
  std::vector<std::vector<double>> out;
  out.reserve(params.size());
  for (const auto &[n, t] : params) out.push_back(t.values());
  return out;
}

inline void restore(NamedParams &params, const std::vector<std::vector<double>> &snap) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto dst = params[i].second.mutable_data();
    std::copy(snap.at(i).begin(), snap.at(i).end(), dst.begin());
  }
}

}  // namespace lfk

#endif  // LFK_MODELS_CLASSIFIER_HPP
