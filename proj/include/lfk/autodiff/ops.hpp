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

#ifndef LFK_AUTODIFF_OPS_HPP
#define LFK_AUTODIFF_OPS_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "lfk/autodiff/tensor.hpp"
#include "lfk/core/rng.hpp"

// Differentiable operations. Every op takes the tape it records on; when the
// tape is disabled or no input requires grad the result is a constant and
// nothing is recorded.
namespace lfk::ad {

namespace detail {

inline bool tracks(const Tape &tape, std::initializer_list<const Tensor *> inputs) {
  if (!tape.enabled()) return false;
  for (const Tensor *t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

inline void require_rank(const Tensor &t, std::size_t rank, const char *op) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) +
                     " tensor, got " + shape_str(t.shape()));
  }
}

inline void require_same_shape(const Tensor &a, const Tensor &b, const char *op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
}

inline double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

// a[m x k] * b[k x n]
inline Tensor matmul(Tape &tape, const Tensor &a, const Tensor &b) {
  detail::require_rank(a, 2, "matmul");
  detail::require_rank(b, 2, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw ShapeError("matmul: inner dimensions differ, " + shape_str(a.shape()) + " x " +
                     shape_str(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  const double *A = a.data().data();
  const double *B = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double *row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = A[i * k + p];
      const double *brow = B + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
  }
  const bool grad = detail::tracks(tape, {&a, &b});
  Tensor y({m, n}, std::move(out), grad);
  if (grad) {
    tape.record([a, b, y, m, k, n]() mutable {
      const auto g = y.grad();
      if (a.requires_grad()) {
        auto ga = a.mutable_grad();
        const auto bd = b.data();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * bd[p * n + j];
            ga[i * k + p] += s;
          }
      }
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        const auto ad = a.data();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            const double aip = ad[i * k + p];
            for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += aip * g[i * n + j];
          }
      }
    });
  }
  return y;
}

// x W + b for x[k] -> [f] or x[n x k] -> [n x f], with W[k x f] and b[f].
inline Tensor affine(Tape &tape, const Tensor &x, const Tensor &w, const Tensor &b) {
  detail::require_rank(w, 2, "affine");
  detail::require_rank(b, 1, "affine");
  if (x.rank() != 1 && x.rank() != 2) {
    throw ShapeError("affine: input must be rank 1 or 2, got " + shape_str(x.shape()));
  }
  const bool vec = x.rank() == 1;
  const std::size_t rows = vec ? 1 : x.dim(0);
  const std::size_t k = vec ? x.dim(0) : x.dim(1);
  const std::size_t f = w.dim(1);
  if (w.dim(0) != k || b.dim(0) != f) {
    throw ShapeError("affine: input " + shape_str(x.shape()) + " incompatible with weight " +
                     shape_str(w.shape()) + " and bias " + shape_str(b.shape()));
  }
  std::vector<double> out(rows * f);
  const auto xd = x.data();
  const auto wd = w.data();
  const auto bd = b.data();
  for (std::size_t r = 0; r < rows; ++r) {
    double *o = out.data() + r * f;
    for (std::size_t j = 0; j < f; ++j) o[j] = bd[j];
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = xd[r * k + p];
      const double *wrow = wd.data() + p * f;
      for (std::size_t j = 0; j < f; ++j) o[j] += xv * wrow[j];
    }
  }
  const bool grad = detail::tracks(tape, {&x, &w, &b});
  Tensor y(vec ? Shape{f} : Shape{rows, f}, std::move(out), grad);
  if (grad) {
    tape.record([x, w, b, y, rows, k, f]() mutable {
      const auto g = y.grad();
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t j = 0; j < f; ++j) gb[j] += g[r * f + j];
      }
      if (w.requires_grad()) {
        auto gw = w.mutable_grad();
        const auto xd = x.data();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t p = 0; p < k; ++p) {
            const double xv = xd[r * k + p];
            for (std::size_t j = 0; j < f; ++j) gw[p * f + j] += xv * g[r * f + j];
          }
      }
      if (x.requires_grad()) {
        auto gx = x.mutable_grad();
        const auto wd = w.data();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t p = 0; p < k; ++p) {
            double s = 0.0;
            for (std::size_t j = 0; j < f; ++j) s += wd[p * f + j] * g[r * f + j];
            gx[r * k + p] += s;
          }
      }
    });
  }
  return y;
}

inline Tensor add(Tape &tape, const Tensor &a, const Tensor &b) {
  detail::require_same_shape(a, b, "add");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  const bool grad = detail::tracks(tape, {&a, &b});
  Tensor y(a.shape(), std::move(out), grad);
  if (grad) {
    tape.record([a, b, y]() mutable {
      const auto g = y.grad();
      if (a.requires_grad()) {
        auto ga = a.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
      }
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
      }
    });
  }
  return y;
}

// Elementwise product.
inline Tensor mul(Tape &tape, const Tensor &a, const Tensor &b) {
  detail::require_same_shape(a, b, "mul");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  const bool grad = detail::tracks(tape, {&a, &b});
  Tensor y(a.shape(), std::move(out), grad);
  if (grad) {
    tape.record([a, b, y]() mutable {
      const auto g = y.grad();
      if (a.requires_grad()) {
        auto ga = a.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
      }
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
      }
    });
  }
  return y;
}

inline Tensor scale(Tape &tape, const Tensor &a, double s) {
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * s;
  const bool grad = detail::tracks(tape, {&a});
  Tensor y(a.shape(), std::move(out), grad);
  if (grad) {
    tape.record([a, y, s]() mutable {
      const auto g = y.grad();
      auto ga = a.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
    });
  }
  return y;
}

// Repeats v[f] as every row of an [n x f] matrix.
inline Tensor broadcast_rows(Tape &tape, const Tensor &v, std::size_t n) {
  detail::require_rank(v, 1, "broadcast_rows");
  if (n == 0) throw ShapeError("broadcast_rows: zero rows");
  const std::size_t f = v.dim(0);
  std::vector<double> out(n * f);
  for (std::size_t r = 0; r < n; ++r) std::copy(v.data().begin(), v.data().end(), out.begin() + r * f);
  const bool grad = detail::tracks(tape, {&v});
  Tensor y({n, f}, std::move(out), grad);
  if (grad) {
    tape.record([v, y, n, f]() mutable {
      const auto g = y.grad();
      auto gv = v.mutable_grad();
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < f; ++j) gv[j] += g[r * f + j];
    });
  }
  return y;
}

namespace detail {

// Unary elementwise op whose derivative is expressed through (x, y).
template <class Fwd, class Deriv>
Tensor unary(Tape &tape, const Tensor &a, Fwd fwd, Deriv deriv) {
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(a[i]);
  const bool grad = tracks(tape, {&a});
  Tensor y(a.shape(), std::move(out), grad);
  if (grad) {
    tape.record([a, y, deriv]() mutable {
      const auto g = y.grad();
      auto ga = a.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * deriv(a[i], y[i]);
    });
  }
  return y;
}

}  // namespace detail

inline Tensor sigmoid(Tape &tape, const Tensor &a) {
  return detail::unary(
      tape, a, [](double x) { return detail::stable_sigmoid(x); },
      [](double, double y) { return y * (1.0 - y); });
}

inline Tensor tanh(Tape &tape, const Tensor &a) {
  return detail::unary(
      tape, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

inline Tensor relu(Tape &tape, const Tensor &a) {
  return detail::unary(
      tape, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

enum class Activation { kTanh, kSigmoid, kRelu, kIdentity };

inline std::string to_string(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

inline Activation parse_activation(const std::string &s) {
  if (s == "tanh") return Activation::kTanh;
  if (s == "sigmoid") return Activation::kSigmoid;
  if (s == "relu") return Activation::kRelu;
  if (s == "identity") return Activation::kIdentity;
  throw InputError("unknown activation '" + s + "' (expected tanh, sigmoid, relu or identity)");
}

inline Tensor activate(Tape &tape, const Tensor &a, Activation act) {
  switch (act) {
    case Activation::kTanh: return tanh(tape, a);
    case Activation::kSigmoid: return sigmoid(tape, a);
    case Activation::kRelu: return relu(tape, a);
    case Activation::kIdentity: return a;
  }
  return a;
}

// Concatenates along the last axis. Inputs are all rank 1, or all rank 2 with
// the same number of rows.
inline Tensor concat(Tape &tape, const std::vector<Tensor> &parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const std::size_t rank = parts.front().rank();
  if (rank != 1 && rank != 2) throw ShapeError("concat: inputs must be rank 1 or 2");
  const std::size_t rows = rank == 1 ? 1 : parts.front().dim(0);
  std::size_t cols = 0;
  bool grad = false;
  for (const Tensor &p : parts) {
    if (p.rank() != rank || (rank == 2 && p.dim(0) != rows)) {
      throw ShapeError("concat: incompatible shapes " + shape_str(parts.front().shape()) +
                       " and " + shape_str(p.shape()));
    }
    cols += p.dim(rank - 1);
    grad = grad || detail::tracks(tape, {&p});
  }
  std::vector<double> out(rows * cols);
  std::size_t offset = 0;
  for (const Tensor &p : parts) {
    const std::size_t w = p.dim(rank - 1);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < w; ++j) out[r * cols + offset + j] = p[r * w + j];
    offset += w;
  }
  Tensor y(rank == 1 ? Shape{cols} : Shape{rows, cols}, std::move(out), grad);
  if (grad) {
    tape.record([parts, y, rows, cols, rank]() mutable {
      const auto g = y.grad();
      std::size_t offset = 0;
      for (const Tensor &p : parts) {
        const std::size_t w = p.dim(rank - 1);
        if (p.requires_grad()) {
          auto gp = p.mutable_grad();
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < w; ++j) gp[r * w + j] += g[r * cols + offset + j];
        }
        offset += w;
      }
    });
  }
  return y;
}

// Column means of M[n x d] -> [d].
inline Tensor mean_rows(Tape &tape, const Tensor &m) {
  detail::require_rank(m, 2, "mean_rows");
  const std::size_t n = m.dim(0), d = m.dim(1);
  std::vector<double> out(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < d; ++j) out[j] += m[r * d + j];
  for (double &v : out) v /= static_cast<double>(n);
  const bool grad = detail::tracks(tape, {&m});
  Tensor y({d}, std::move(out), grad);
  if (grad) {
    tape.record([m, y, n, d]() mutable {
      const auto g = y.grad();
      auto gm = m.mutable_grad();
      const double inv = 1.0 / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < d; ++j) gm[r * d + j] += g[j] * inv;
    });
  }
  return y;
}

inline Tensor sum(Tape &tape, const Tensor &a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  const bool grad = detail::tracks(tape, {&a});
  Tensor y({1}, {s}, grad);
  if (grad) {
    tape.record([a, y]() mutable {
      const double g = y.grad()[0];
      for (double &ga : a.mutable_grad()) ga += g;
    });
  }
  return y;
}

// Numerically stable softmax over a vector.
inline Tensor softmax(Tape &tape, const Tensor &v) {
  detail::require_rank(v, 1, "softmax");
  const std::size_t n = v.dim(0);
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v.data()) mx = std::max(mx, x);
  std::vector<double> out(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(v[i] - mx);
    z += out[i];
  }
  for (double &o : out) o /= z;
  const bool grad = detail::tracks(tape, {&v});
  Tensor y({n}, std::move(out), grad);
  if (grad) {
    tape.record([v, y, n]() mutable {
      const auto g = y.grad();
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += g[i] * y[i];
      auto gv = v.mutable_grad();
      for (std::size_t i = 0; i < n; ++i) gv[i] += y[i] * (g[i] - dot);
    });
  }
  return y;
}

// Per-feature maximum over the sequence axis. Gradient goes to the first
// (lowest index) maximal position of each feature.
inline Tensor maxpool_time(Tape &tape, const Tensor &seq) {
  detail::require_rank(seq, 2, "maxpool_time");
  const std::size_t n = seq.dim(0), f = seq.dim(1);
  std::vector<double> out(f);
  std::vector<std::size_t> argmax(f, 0);
  for (std::size_t j = 0; j < f; ++j) {
    double best = seq[j];
    for (std::size_t t = 1; t < n; ++t) {
      if (seq[t * f + j] > best) {
        best = seq[t * f + j];
        argmax[j] = t;
      }
    }
    out[j] = best;
  }
  const bool grad = detail::tracks(tape, {&seq});
  Tensor y({f}, std::move(out), grad);
  if (grad) {
    tape.record([seq, y, argmax, f]() mutable {
      const auto g = y.grad();
      auto gs = seq.mutable_grad();
      for (std::size_t j = 0; j < f; ++j) gs[argmax[j] * f + j] += g[j];
    });
  }
  return y;
}

// Left zero-padding of a width-w window; the right side gets the remainder.
inline std::size_t conv_left_pad(std::size_t w) { return (w - 1) / 2; }

// Same-length 1-D convolution of seq[n x d_in] with filters[w x d_in x f] and
// bias[f]: out[t] = bias + sum_k seq[t + k - left_pad] . filters[k], where
// out-of-range rows are zero.
inline Tensor conv1d_same(Tape &tape, const Tensor &seq, const Tensor &filters,
                          const Tensor &bias) {
  detail::require_rank(seq, 2, "conv1d_same");
  detail::require_rank(filters, 3, "conv1d_same");
  detail::require_rank(bias, 1, "conv1d_same");
  const std::size_t n = seq.dim(0), d = seq.dim(1);
  const std::size_t w = filters.dim(0), f = filters.dim(2);
  if (filters.dim(1) != d || bias.dim(0) != f) {
    throw ShapeError("conv1d_same: sequence " + shape_str(seq.shape()) + ", filters " +
                     shape_str(filters.shape()) + " and bias " + shape_str(bias.shape()) +
                     " are incompatible");
  }
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(conv_left_pad(w));
  std::vector<double> out(n * f);
  const double *S = seq.data().data();
  const double *W = filters.data().data();
  for (std::size_t t = 0; t < n; ++t) {
    double *o = out.data() + t * f;
    for (std::size_t j = 0; j < f; ++j) o[j] = bias[j];
    for (std::size_t k = 0; k < w; ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) - pad;
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(n)) continue;
      const double *row = S + src * d;
      const double *wk = W + k * d * f;
      for (std::size_t c = 0; c < d; ++c) {
        const double x = row[c];
        const double *wc = wk + c * f;
        for (std::size_t j = 0; j < f; ++j) o[j] += x * wc[j];
      }
    }
  }
  const bool grad = detail::tracks(tape, {&seq, &filters, &bias});
  Tensor y({n, f}, std::move(out), grad);
  if (grad) {
    tape.record([seq, filters, bias, y, n, d, w, f, pad]() mutable {
      const auto g = y.grad();
      if (bias.requires_grad()) {
        auto gb = bias.mutable_grad();
        for (std::size_t t = 0; t < n; ++t)
          for (std::size_t j = 0; j < f; ++j) gb[j] += g[t * f + j];
      }
      const auto sd = seq.data();
      const auto wd = filters.data();
      const bool want_w = filters.requires_grad();
      const bool want_s = seq.requires_grad();
      std::span<double> gw = want_w ? filters.mutable_grad() : std::span<double>();
      std::span<double> gs = want_s ? seq.mutable_grad() : std::span<double>();
      for (std::size_t t = 0; t < n; ++t) {
        const double *gt = g.data() + t * f;
        for (std::size_t k = 0; k < w; ++k) {
          const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) - pad;
          if (src < 0 || src >= static_cast<std::ptrdiff_t>(n)) continue;
          for (std::size_t c = 0; c < d; ++c) {
            const std::size_t base = (k * d + c) * f;
            if (want_w) {
              const double x = sd[src * d + c];
              for (std::size_t j = 0; j < f; ++j) gw[base + j] += x * gt[j];
            }
            if (want_s) {
              double s = 0.0;
              for (std::size_t j = 0; j < f; ++j) s += wd[base + j] * gt[j];
              gs[src * d + c] += s;
            }
          }
        }
      }
    });
  }
  return y;
}

// -log softmax(logits)[label] for a two-class logit vector.
inline Tensor cross_entropy(Tape &tape, const Tensor &logits, int label) {
  if (logits.rank() != 1 || logits.dim(0) != 2) {
    throw ShapeError("cross_entropy: expected logits of shape [2], got " +
                     shape_str(logits.shape()));
  }
  if (label != 0 && label != 1) {
    throw InputError("cross_entropy: label must be 0 or 1, got " + std::to_string(label));
  }
  // log(e^l0 + e^l1) - mx = log1p(e^-|l0 - l1|), kept separate from the
  // (mx - l_label) term so confident predictions keep full precision.
  const double mx = std::max(logits[0], logits[1]);
  const double shifted_lse = std::log1p(std::exp(-std::abs(logits[0] - logits[1])));
  const bool grad = detail::tracks(tape, {&logits});
  Tensor y({1}, {(mx - logits[label]) + shifted_lse}, grad);
  if (grad) {
    tape.record([logits, y, mx, shifted_lse, label]() mutable {
      const double g = y.grad()[0];
      auto gl = logits.mutable_grad();
      for (int c = 0; c < 2; ++c) {
        const double p = std::exp(logits[c] - mx - shifted_lse);
        gl[c] += g * (p - (c == label ? 1.0 : 0.0));
      }
    });
  }
  return y;
}

// Rows of table[V x u] selected by index -> [n x u].
inline Tensor gather_rows(Tape &tape, const Tensor &table, const std::vector<std::size_t> &idx) {
  detail::require_rank(table, 2, "gather_rows");
  if (idx.empty()) throw ShapeError("gather_rows: no indices");
  const std::size_t v = table.dim(0), u = table.dim(1);
  std::vector<double> out(idx.size() * u);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= v) {
      throw ShapeError("gather_rows: index " + std::to_string(idx[r]) + " out of range for " +
                       shape_str(table.shape()));
    }
    std::copy_n(table.data().begin() + idx[r] * u, u, out.begin() + r * u);
  }
  const bool grad = detail::tracks(tape, {&table});
  Tensor y({idx.size(), u}, std::move(out), grad);
  if (grad) {
    tape.record([table, y, idx, u]() mutable {
      const auto g = y.grad();
      auto gt = table.mutable_grad();
      for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t j = 0; j < u; ++j) gt[idx[r] * u + j] += g[r * u + j];
    });
  }
  return y;
}

inline Tensor reshape(Tape &tape, const Tensor &a, Shape shape) {
  if (shape_numel(shape) != a.numel()) {
    throw ShapeError("reshape: cannot view " + shape_str(a.shape()) + " as " + shape_str(shape));
  }
  const bool grad = detail::tracks(tape, {&a});
  Tensor y(std::move(shape), a.values(), grad);
  if (grad) {
    tape.record([a, y]() mutable {
      const auto g = y.grad();
      auto ga = a.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    });
  }
  return y;
}

// Row i of M[n x f] -> [f].
inline Tensor row(Tape &tape, const Tensor &m, std::size_t i) {
  detail::require_rank(m, 2, "row");
  if (i >= m.dim(0)) {
    throw ShapeError("row: index " + std::to_string(i) + " out of range for " + shape_str(m.shape()));
  }
  return reshape(tape, gather_rows(tape, m, {i}), {m.dim(1)});
}

// Inverted dropout: zero each coordinate with probability p and scale
// survivors by 1/(1-p).
inline Tensor dropout(Tape &tape, const Tensor &a, double p, Rng &rng) {
  if (p <= 0.0) return a;
  const double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(a.numel());
  for (double &m : mask) m = rng.bernoulli(p) ? 0.0 : keep_scale;
  return mul(tape, a, Tensor(a.shape(), std::move(mask)));
}

}  // namespace lfk::ad

#endif  // LFK_AUTODIFF_OPS_HPP
