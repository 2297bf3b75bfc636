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

#ifndef LFK_AUTODIFF_GRADCHECK_HPP
#define LFK_AUTODIFF_GRADCHECK_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lfk/autodiff/tensor.hpp"

namespace lfk::ad {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

// |a - n| / max(|a|, |n|, floor)
inline double relative_error(double analytic, double numeric, double floor = 1e-8) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

// Compares tape gradients of a scalar loss against central finite differences
// for every element of every listed tensor. `loss_fn(Tape&)` must rebuild the
// loss from the current tensor values each call.
// Central differences. The fourth-order stencil cuts the truncation error to
// O(h^4), which allows a larger step and therefore much less cancellation
// noise; it is the better oracle when whole-model gradients are tiny.
enum class Stencil { kSecondOrder, kFourthOrder };

template <class LossFn>
GradCheckResult gradcheck(LossFn &&loss_fn, std::vector<std::pair<std::string, Tensor>> params,
                          double h = 1e-5, double floor = 1e-8, Stencil stencil = Stencil::kSecondOrder) {
  for (auto &[name, t] : params) {
    if (!t.requires_grad()) t.set_requires_grad(true);
    t.zero_grad();
  }
  {
    Tape tape;
    Tensor loss = loss_fn(tape);
    tape.backward(loss);
  }
  GradCheckResult result;
  for (auto &[name, t] : params) {
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    for (std::size_t i = 0; i < t.numel(); ++i) {
      const double saved = t[i];
      auto at = [&](double offset) {
        Tape off(false);
        t[i] = saved + offset;
        return loss_fn(off).item();
      };
      double numeric = 0.0;
      if (stencil == Stencil::kFourthOrder) {
        numeric = (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
      } else {
        numeric = (at(h) - at(-h)) / (2.0 * h);
      }
      t[i] = saved;
      const double rel = relative_error(analytic[i], numeric, floor);
      ++result.checked;
      if (rel > result.max_rel_error || result.worst_param.empty()) {
        if (rel >= result.max_rel_error) {
          result.max_rel_error = rel;
          result.worst_param = name;
          result.worst_index = i;
          result.worst_analytic = analytic[i];
          result.worst_numeric = numeric;
        }
      }
    }
  }
  return result;
}

}  // namespace lfk::ad

#endif  // LFK_AUTODIFF_GRADCHECK_HPP
