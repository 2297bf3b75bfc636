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

#ifndef LFK_TRAIN_TRAINER_HPP
#define LFK_TRAIN_TRAINER_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfk/autodiff/ops.hpp"
#include "lfk/core/error.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/eval/metrics.hpp"
#include "lfk/models/classifier.hpp"
#include "lfk/train/adadelta.hpp"

namespace lfk {

struct TrainConfig {
  std::size_t batch_size = 50;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  std::uint64_t seed = 1;
  // Negatives kept per positive in each epoch; 0 keeps every negative.
  double negative_ratio = 0.0;
  AdadeltaOptions optimizer;
  unsigned eval_threads = 1;

  void validate() const {
    if (batch_size < 1) throw InputError("batch size must be at least 1");
    if (max_epochs < 1) throw InputError("max epochs must be at least 1");
    if (patience < 1) throw InputError("patience must be at least 1");
    if (negative_ratio < 0.0) throw InputError("negative ratio must be non-negative");
    if (!(optimizer.rho > 0.0 && optimizer.rho < 1.0)) throw InputError("rho must lie in (0, 1)");
    if (!(optimizer.epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (!(optimizer.learning_rate > 0.0)) throw InputError("learning rate must be positive");
  }

  nlohmann::ordered_json to_json() const {
    return {{"batch_size", batch_size},         {"max_epochs", max_epochs},
            {"patience", patience},             {"seed", seed},
            {"negative_ratio", negative_ratio}, {"rho", optimizer.rho},
            {"epsilon", optimizer.epsilon},     {"lr", optimizer.learning_rate}};
  }
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_p = 0.0;
  double dev_r = 0.0;
  double dev_f1 = 0.0;
  double seconds = 0.0;

  nlohmann::ordered_json to_json() const {
    return {{"epoch", epoch},   {"train_loss", train_loss}, {"dev_p", dev_p},
            {"dev_r", dev_r},   {"dev_f1", dev_f1},         {"seconds", seconds}};
  }
};

// Best-so-far tracking on dev F1. Only a strictly higher score counts as an
// improvement, so ties keep the earlier epoch.
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

  // Returns true when `score` is a new best.
  bool observe(std::size_t epoch, double score) {
    if (!has_best_ || score > best_score_) {
      has_best_ = true;
      best_score_ = score;
      best_epoch_ = epoch;
      since_best_ = 0;
      return true;
    }
    ++since_best_;
    return false;
  }

  bool should_stop() const { return has_best_ && since_best_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_score() const { return best_score_; }

 private:
  std::size_t patience_;
  bool has_best_ = false;
  double best_score_ = 0.0;
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
};

struct TrainResult {
  std::size_t best_epoch = 0;
  EvalReport best_dev;
  std::vector<EpochLog> log;
  double initial_loss = 0.0;
};

// Mean eval-mode cross-entropy over a dataset.
template <Classifier M>
double mean_loss(const M &model, const std::vector<LFKExample> &data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const auto &ex : data) {
    Tape off(false);
    total += ad::cross_entropy(off, model.forward(off, ex, Mode::kEval, nullptr, nullptr), ex.label)
                 .item();
  }
  return total / static_cast<double>(data.size());
}

// Mini-batch Adadelta training with dev-F1 model selection. Randomness comes
// from the "shuffle", "subsample" and "dropout" substreams of the seed. On
// return the model holds the parameters of the best dev epoch.
template <Classifier M>
TrainResult train(M &model, const std::vector<LFKExample> &train_set,
                  const std::vector<LFKExample> &dev_set, const TrainConfig &cfg,
                  const std::function<void(const EpochLog &)> &on_epoch = {}) {
  cfg.validate();
  if (train_set.empty()) throw InputError("training set is empty");
  if (dev_set.empty()) throw InputError("dev set is empty");
  const bool dev_has_positive =
      std::any_of(dev_set.begin(), dev_set.end(), [](const LFKExample &e) { return e.label == 1; });
  if (!dev_has_positive) throw InputError("dev set has no positive examples; F1 is undefined");

  const Rng root(cfg.seed);
  Rng shuffle_rng = root.substream("shuffle");
  Rng subsample_rng = root.substream("subsample");
  Rng dropout_rng = root.substream("dropout");

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < train_set.size(); ++i)
    (train_set[i].label == 1 ? positives : negatives).push_back(i);

  NamedParams &params = model.params();
  Adadelta optimizer(cfg.optimizer);
  EarlyStopper stopper(cfg.patience);
  TrainResult result;
  result.initial_loss = mean_loss(model, train_set);
  auto best = snapshot(params);

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::size_t> order;
    if (cfg.negative_ratio > 0.0) {
      order = positives;
      std::vector<std::size_t> neg = negatives;
      subsample_rng.shuffle(neg);
      const auto keep = std::min<std::size_t>(
          neg.size(), static_cast<std::size_t>(std::ceil(cfg.negative_ratio * positives.size())));
      order.insert(order.end(), neg.begin(), neg.begin() + keep);
    } else {
      order.resize(train_set.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
    }
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const std::size_t e = std::min(order.size(), b + cfg.batch_size);
      zero_grads(params);
      for (std::size_t k = b; k < e; ++k) {
        const LFKExample &ex = train_set[order[k]];
        Tape tape;
        Tensor logits = model.forward(tape, ex, Mode::kTrain, &dropout_rng, nullptr);
        Tensor loss = ad::cross_entropy(tape, logits, ex.label);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw NumericError("non-finite training loss at epoch " + std::to_string(epoch));
        }
        epoch_loss += value;
        tape.backward(loss);
      }
      optimizer.step(params, 1.0 / static_cast<double>(e - b));
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = epoch_loss / static_cast<double>(order.size());
    const EvalReport dev = evaluate(model, dev_set, false, cfg.eval_threads);
    log.dev_p = dev.precision;
    log.dev_r = dev.recall;
    log.dev_f1 = dev.f1;
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);

    if (stopper.observe(epoch, dev.f1)) {
      best = snapshot(params);
      result.best_epoch = epoch;
      result.best_dev = dev;
    }
    if (stopper.should_stop()) break;
  }
  restore(params, best);
  return result;
}

}  // namespace lfk

#endif  // LFK_TRAIN_TRAINER_HPP
