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

#ifndef LFK_EVAL_METRICS_HPP
#define LFK_EVAL_METRICS_HPP

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "lfk/autodiff/tensor.hpp"
#include "lfk/core/error.hpp"
#include "lfk/data/corpus.hpp"
#include "lfk/models/classifier.hpp"

namespace lfk {

// Positive-class (keyword match) scores over pooled counts.
struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<int> predictions;  // filled on request, in dataset order

  void finalize() {
    precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  }

  void add(int gold, int predicted) {
    if (predicted == 1) {
      (gold == 1 ? tp : fp)++;
    } else {
      (gold == 1 ? fn : tn)++;
    }
  }

  void merge(const EvalReport &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tp"] = tp;
    j["fp"] = fp;
    j["fn"] = fn;
    j["tn"] = tn;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f1"] = f1;
    if (!predictions.empty()) j["predictions"] = predictions;
    return j;
  }
};

// Argmax of two logits; a tie predicts no match.
inline int predict_label(const Tensor &logits) { return logits[1] > logits[0] ? 1 : 0; }

inline EvalReport score_predictions(const std::vector<int> &gold, const std::vector<int> &pred) {
  if (gold.size() != pred.size()) throw InputError("gold and predicted label counts differ");
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) r.add(gold[i], pred[i]);
  r.finalize();
  return r;
}

// Eval-mode predictions over the dataset, optionally sharded across threads.
// Counts are summed, so the result does not depend on the sharding.
template <Classifier M>
EvalReport evaluate(const M &model, const std::vector<LFKExample> &data, bool keep_predictions = false,
                    unsigned threads = 1) {
  if (data.empty()) throw InputError("cannot evaluate on an empty dataset");
  std::vector<int> pred(data.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Tape off(false);
      pred[i] = predict_label(model.forward(off, data[i], Mode::kEval, nullptr, nullptr));
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(data.size())));
  if (threads == 1) {
    run(0, data.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (data.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(data.size(), b + chunk);
      if (b < e) pool.emplace_back(run, b, e);
    }
    for (auto &th : pool) th.join();
  }
  EvalReport r;
  for (std::size_t i = 0; i < data.size(); ++i) r.add(data[i].label, pred[i]);
  r.finalize();
  if (keep_predictions) r.predictions = std::move(pred);
  return r;
}

inline std::string percent1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * v);
  return buf;
}

// Aligned P / R / F1 table in percent with one decimal.
inline std::string format_report_table(const std::string &label, const EvalReport &r) {
  std::ostringstream os;
  const std::size_t w = std::max<std::size_t>(label.size(), 5) + 2;
  auto pad = [](std::string s, std::size_t n) {
    if (s.size() < n) s.insert(0, n - s.size(), ' ');
    return s;
  };
  std::string head = "Model";
  head.resize(w, ' ');
  std::string name = label;
  name.resize(w, ' ');
  os << head << pad("P", 7) << pad("R", 7) << pad("F1", 7) << pad("TP", 8) << pad("FP", 8)
     << pad("FN", 8) << '\n';
  os << name << pad(percent1(r.precision), 7) << pad(percent1(r.recall), 7)
     << pad(percent1(r.f1), 7) << pad(std::to_string(r.tp), 8) << pad(std::to_string(r.fp), 8)
     << pad(std::to_string(r.fn), 8) << '\n';
  return os.str();
}

}  // namespace lfk

#endif  // LFK_EVAL_METRICS_HPP
