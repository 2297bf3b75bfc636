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

#ifndef LFK_TRAIN_ADADELTA_HPP
#define LFK_TRAIN_ADADELTA_HPP

#include <cmath>
#include <string>
#include <vector>

#include "lfk/autodiff/tensor.hpp"
#include "lfk/core/error.hpp"
#include "lfk/models/classifier.hpp"

namespace lfk {

struct AdadeltaOptions {
  double rho = 0.95;
  double epsilon = 1e-6;
  double learning_rate = 1.0;
};

// Running averages E[g^2] and E[dx^2], one buffer per parameter tensor.
struct AdadeltaState {
  std::vector<std::vector<double>> sq_grad;
  std::vector<std::vector<double>> sq_update;
};

// Adadelta (Zeiler 2012):
//   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
//   dx       = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
//   x       <- x + lr * dx
// `grad_scale` multiplies every gradient first (e.g. 1 / batch size).
inline void adadelta_step(NamedParams &params, AdadeltaState &state, const AdadeltaOptions &opt,
                          double grad_scale = 1.0) {
  if (state.sq_grad.empty()) {
    for (const auto &[name, t] : params) {
      state.sq_grad.emplace_back(t.numel(), 0.0);
      state.sq_update.emplace_back(t.numel(), 0.0);
    }
  }
  if (state.sq_grad.size() != params.size()) {
    throw ContractError("optimizer state tracks " + std::to_string(state.sq_grad.size()) +
                        " tensors but " + std::to_string(params.size()) + " were given");
  }
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto &[name, t] = params[p];
    if (!t.requires_grad() || t.grad().size() != t.numel()) {
      throw ContractError("parameter '" + name + "' has no gradient");
    }
    auto x = t.mutable_data();
    const auto g = t.grad();
    auto &eg = state.sq_grad[p];
    auto &ex = state.sq_update[p];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double gi = g[i] * grad_scale;
      eg[i] = opt.rho * eg[i] + (1.0 - opt.rho) * gi * gi;
      const double dx = -std::sqrt(ex[i] + opt.epsilon) / std::sqrt(eg[i] + opt.epsilon) * gi;
      ex[i] = opt.rho * ex[i] + (1.0 - opt.rho) * dx * dx;
      x[i] += opt.learning_rate * dx;
    }
  }
}

class Adadelta {
 public:
  explicit Adadelta(AdadeltaOptions opt = {}) : opt_(opt) {}

  void step(NamedParams &params, double grad_scale = 1.0) {
    adadelta_step(params, state_, opt_, grad_scale);
  }

  const AdadeltaOptions &options() const { return opt_; }
  const AdadeltaState &state() const { return state_; }
  AdadeltaState &state() { return state_; }

 private:
  AdadeltaOptions opt_;
  AdadeltaState state_;
};

}  // namespace lfk

#endif  // LFK_TRAIN_ADADELTA_HPP
