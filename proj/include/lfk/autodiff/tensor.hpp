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

#ifndef LFK_AUTODIFF_TENSOR_HPP
#define LFK_AUTODIFF_TENSOR_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lfk/core/error.hpp"

namespace lfk {

using Shape = std::vector<std::size_t>;

inline std::string shape_str(const Shape &shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

inline std::size_t shape_numel(const Shape &shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

// Dense row-major array of doubles. Copies of a Tensor share storage, so a
// parameter held by a model and the same parameter seen by the tape are one
// object; use clone() for an independent copy.
class Tensor {
 public:
  Tensor() = default;

  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false)
      : storage_(std::make_shared<Storage>()) {
    for (std::size_t d : shape) {
      if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_str(shape));
    }
    if (shape_numel(shape) != data.size()) {
      throw ShapeError("shape " + shape_str(shape) + " does not match " +
                       std::to_string(data.size()) + " values");
    }
    storage_->shape = std::move(shape);
    storage_->data = std::move(data);
    set_requires_grad(requires_grad);
  }

  static Tensor zeros(Shape shape, bool requires_grad = false) {
    const std::size_t n = shape_numel(shape);
    return Tensor(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
  }

  static Tensor filled(Shape shape, double value, bool requires_grad = false) {
    const std::size_t n = shape_numel(shape);
    return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
  }

  static Tensor scalar(double v, bool requires_grad = false) {
    return Tensor({1}, {v}, requires_grad);
  }

  static Tensor vector(std::vector<double> v, bool requires_grad = false) {
    const std::size_t n = v.size();
    return Tensor({n}, std::move(v), requires_grad);
  }

  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> v,
                       bool requires_grad = false) {
    return Tensor({rows, cols}, std::move(v), requires_grad);
  }

  bool defined() const { return storage_ != nullptr; }

  const Shape &shape() const { return storage_->shape; }
  std::size_t rank() const { return storage_->shape.size(); }
  std::size_t dim(std::size_t i) const { return storage_->shape.at(i); }
  std::size_t numel() const { return storage_->data.size(); }

  std::span<const double> data() const { return storage_->data; }
  std::span<double> mutable_data() { return storage_->data; }
  const std::vector<double> &values() const { return storage_->data; }

  double operator[](std::size_t i) const { return storage_->data[i]; }
  double &operator[](std::size_t i) { return storage_->data[i]; }

  double at(std::size_t r, std::size_t c) const {
    return storage_->data[r * storage_->shape[1] + c];
  }
  double &at(std::size_t r, std::size_t c) { return storage_->data[r * storage_->shape[1] + c]; }

  double item() const {
    if (numel() != 1) throw ShapeError("item() on tensor of shape " + shape_str(shape()));
    return storage_->data[0];
  }

  bool requires_grad() const { return storage_->requires_grad; }

  void set_requires_grad(bool on) {
    storage_->requires_grad = on;
    if (on) {
      storage_->grad.assign(storage_->data.size(), 0.0);
    } else {
      storage_->grad.clear();
    }
  }

  std::span<const double> grad() const { return storage_->grad; }
  // Gradient buffers are accumulation state shared by every handle, so they
  // stay writable through const handles held by backward rules.
  std::span<double> mutable_grad() const { return storage_->grad; }

  void zero_grad() { std::fill(storage_->grad.begin(), storage_->grad.end(), 0.0); }

  Tensor clone() const {
    Tensor t(shape(), storage_->data, false);
    if (requires_grad()) {
      t.storage_->requires_grad = true;
      t.storage_->grad = storage_->grad;
    }
    return t;
  }

  bool same_storage(const Tensor &other) const { return storage_ == other.storage_; }

 private:
  struct Storage {
    Shape shape;
    std::vector<double> data;
    std::vector<double> grad;
    bool requires_grad = false;
  };

  std::shared_ptr<Storage> storage_;
};

// Records backward closures in forward order and replays them in reverse.
// A disabled tape records nothing, which is how evaluation avoids building a
// graph.
class Tape {
 public:
  explicit Tape(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }

  void record(std::function<void()> backward_rule) {
    if (enabled_) rules_.push_back(std::move(backward_rule));
  }

  std::size_t size() const { return rules_.size(); }

  // Seeds d(loss)/d(loss) = seed and runs every rule in reverse order. The
  // tape is cleared afterwards; gradients accumulate into leaf tensors.
  void backward(const Tensor &loss, double seed = 1.0) {
    if (loss.numel() != 1) {
      throw ShapeError("backward() needs a scalar loss, got " + shape_str(loss.shape()));
    }
    if (!loss.requires_grad()) {
      throw ContractError("backward() on a loss that does not require grad");
    }
    loss.mutable_grad()[0] += seed;
    for (auto it = rules_.rbegin(); it != rules_.rend(); ++it) (*it)();
    rules_.clear();
  }

  void clear() { rules_.clear(); }

 private:
  bool enabled_;
  std::vector<std::function<void()>> rules_;
};

}  // namespace lfk

#endif  // LFK_AUTODIFF_TENSOR_HPP
