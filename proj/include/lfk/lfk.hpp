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

// Umbrella header for the learning-from-keywords event detection toolkit.

#ifndef LFK_LFK_HPP
#define LFK_LFK_HPP

#include "lfk/autodiff/gradcheck.hpp"
#include "lfk/autodiff/ops.hpp"
#include "lfk/autodiff/tensor.hpp"
#include "lfk/baseline/word2vec_baseline.hpp"
#include "lfk/core/error.hpp"
#include "lfk/core/rng.hpp"
#include "lfk/data/corpus.hpp"
#include "lfk/data/datagen.hpp"
#include "lfk/data/synth.hpp"
#include "lfk/encoding/embeddings.hpp"
#include "lfk/encoding/encoding.hpp"
#include "lfk/eval/metrics.hpp"
#include "lfk/models/checkpoint.hpp"
#include "lfk/models/classifier.hpp"
#include "lfk/models/cnn_model.hpp"
#include "lfk/models/config.hpp"
#include "lfk/train/adadelta.hpp"
#include "lfk/train/trainer.hpp"

#endif  // LFK_LFK_HPP
