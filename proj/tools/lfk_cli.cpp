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

// Command-line driver: synth -> gen-data -> train -> eval, plus gradcheck.
//
// Exit codes: 0 success, 1 failed check, 2 input or configuration error,
// 3 numeric failure during training, 4 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "digest.hpp"
#include "json_config.hpp"
#include "lfk/lfk.hpp"
#include "run_manifest.hpp"

#ifndef LFK_VERSION
#define LFK_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace lfk::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInternal = 4;

std::string join(const fs::path &dir, const std::string &name) { return (dir / name).string(); }

void ensure_dir(const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory '" + dir + "': " + ec.message());
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << text;
}

void write_json(const std::string &path, const ordered_json &j) { write_text(path, j.dump(2) + "\n"); }

std::vector<LFKExample> strip_provenance(std::vector<LFKExample> examples) {
  for (auto &e : examples) e.provenance.reset();
  return examples;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string spec;
  std::uint64_t seed = 1;
  std::string out_dir;
};

void add_synth(CLI::App &app, SynthArgs &a) {
  auto *cmd = app.add_subcommand("synth", "Generate a synthetic annotated corpus with embeddings");
  cmd->add_option("--spec", a.spec, "Synthetic corpus spec (JSON); defaults apply when omitted")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out-dir", a.out_dir, "Output directory")->required();
}

int run_synth(const SynthArgs &a) {
  const SynthSpec spec = a.spec.empty() ? SynthSpec{} : SynthSpec::from_json(io::parse_json_file(a.spec));
  const SynthResult s = synth_corpus(spec, a.seed);
  ensure_dir(a.out_dir);
  RunManifest manifest("synth", LFK_VERSION);
  manifest.set_seed(a.seed);
  manifest.set_config(spec.to_json());
  if (!a.spec.empty()) manifest.add_input("spec", a.spec);
  const fs::path dir(a.out_dir);
  const std::pair<const Corpus *, const char *> splits[] = {
      {&s.train, "corpus-train.jsonl"}, {&s.dev, "corpus-dev.jsonl"}, {&s.test, "corpus-test.jsonl"}};
  for (const auto &[corpus, name] : splits) {
    io::write_corpus(*corpus, join(dir, name));
    manifest.add_output(join(dir, name));
  }
  io::write_type_map(s.type_map, join(dir, "typemap.json"));
  io::write_lexicon(s.lexicon, join(dir, "lexicon.json"));
  write_embeddings(s.embeddings, join(dir, "embeddings.txt"));
  write_json(join(dir, "synth_spec.json"), spec.to_json());
  for (const char *name : {"typemap.json", "lexicon.json", "embeddings.txt", "synth_spec.json"})
    manifest.add_output(join(dir, name));
  manifest.write(join(dir, "run_manifest.json"));
  std::cout << "wrote " << s.train.sentence_count() << "/" << s.dev.sentence_count() << "/"
            << s.test.sentence_count() << " train/dev/test sentences to " << a.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenArgs {
  std::string corpus_train, corpus_dev, corpus_test, typemap, lexicon, target, out_dir;
  std::uint64_t seed = 1;
  bool debug_provenance = false;
};

void add_gen(CLI::App &app, GenArgs &a) {
  auto *cmd = app.add_subcommand("gen-data", "Apply the target-type holdout and generate LFK datasets");
  cmd->add_option("--corpus-train", a.corpus_train, "Training corpus (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--corpus-dev", a.corpus_dev, "Development corpus (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--corpus-test", a.corpus_test, "Test corpus (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--typemap", a.typemap, "Subtype to type map (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", a.lexicon,
                  "Trigger lexicon (JSON); collected from the training corpus when omitted")
      ->check(CLI::ExistingFile);
  cmd->add_option("--target-type", a.target, "Event type held out from training")->required();
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out-dir", a.out_dir, "Output directory")->required();
  cmd->add_flag("--debug-provenance", a.debug_provenance,
                "Keep the source and keyword subtype of every example in the output");
}

int run_gen(const GenArgs &a) {
  const Corpus train = io::read_corpus(a.corpus_train);
  const Corpus dev = io::read_corpus(a.corpus_dev);
  const Corpus test = io::read_corpus(a.corpus_test);
  const TypeMap types = io::read_type_map(a.typemap);
  for (const auto &[c, path] : {std::pair{&train, &a.corpus_train}, {&dev, &a.corpus_dev}, {&test, &a.corpus_test}}) {
    try {
      validate_corpus(*c, types);
    } catch (const InputError &e) {
      throw InputError(*path + ": " + e.what());
    }
  }
  // The lexicon comes from the original training corpus, before the holdout.
  const TriggerLexicon lexicon = a.lexicon.empty() ? collect_lexicon(train) : io::read_lexicon(a.lexicon);
  const HoldoutResult h = holdout_split(train, dev, test, a.target, types);

  ensure_dir(a.out_dir);
  const fs::path dir(a.out_dir);
  RunManifest manifest("gen-data", LFK_VERSION);
  manifest.set_seed(a.seed);
  ordered_json cfg = {{"target_type", a.target},
                      {"debug_provenance", a.debug_provenance},
                      {"lexicon_source", a.lexicon.empty() ? "training corpus" : "file"}};
  manifest.set_config(cfg);
  manifest.add_input("corpus-train", a.corpus_train);
  manifest.add_input("corpus-dev", a.corpus_dev);
  manifest.add_input("corpus-test", a.corpus_test);
  manifest.add_input("typemap", a.typemap);
  if (!a.lexicon.empty()) manifest.add_input("lexicon", a.lexicon);

  StatsReport stats[3];
  const std::pair<const Corpus *, Split> parts[] = {
      {&h.train, Split::kTrain}, {&h.dev, Split::kDev}, {&h.test, Split::kTest}};
  for (int i = 0; i < 3; ++i) {
    auto examples = generate_lfk(*parts[i].first, lexicon, types, a.target, parts[i].second, a.seed);
    stats[i] = dataset_stats(examples);
    const std::string path = join(dir, to_string(parts[i].second) + ".jsonl");
    io::write_examples(a.debug_provenance ? examples : strip_provenance(std::move(examples)), path);
    manifest.add_output(path);
  }
  ordered_json sj;
  sj["target_type"] = a.target;
  for (int i = 0; i < 3; ++i) {
    sj[to_string(parts[i].second)] = {{"positive", stats[i].positives}, {"negative", stats[i].negatives}};
  }
  sj["generation"] = {{"keywords_per_example", kKeywordSetSize},
                      {"positives_per_mention", kPositivesPerMention},
                      {"negative_subtype_distribution", "uniform"},
                      {"distinct_positive_keyword_sets", true}};
  write_json(join(dir, "stats.json"), sj);
  const std::string table = format_stats_table(a.target, stats[0], stats[1], stats[2]);
  write_text(join(dir, "stats.txt"), table);
  manifest.add_output(join(dir, "stats.json"));
  manifest.add_output(join(dir, "stats.txt"));
  manifest.write(join(dir, "run_manifest.json"));
  std::cout << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string config, data_dir, model = "attention-cfa", embeddings, out;
  std::string oov_policy = "random-fixed";
  std::string cnn_act = "tanh", att_act = "tanh", cfa_act = "sigmoid", ffn_act = "tanh";
  std::uint64_t seed = 1;
  bool sweep_layers = false;
  std::size_t window_radius = kBaselineWindowRadius;
  ModelConfig mc;
  TrainConfig tc;
};

void add_train(CLI::App &app, TrainArgs &a) {
  auto *cmd = app.add_subcommand("train", "Train a model on generated LFK datasets");
  cmd->add_option("--config", a.config, "JSON file of option values; flags override it")
      ->check(CLI::ExistingFile);
  cmd->add_option("--data-dir", a.data_dir, "Directory holding train.jsonl and dev.jsonl");
  cmd->add_option("--model", a.model,
                  "concat, attention, concat-cfa, attention-cfa or word2vec-baseline")
      ->capture_default_str();
  cmd->add_option("--embeddings", a.embeddings, "Word embeddings (text format)");
  cmd->add_option("--out", a.out, "Output directory");
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_option("--layers", a.mc.layers, "Number of CNN layers (1-4)")->capture_default_str();
  cmd->add_option("--windows", a.mc.windows, "Comma-separated window sizes")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--filters", a.mc.filters, "Filters per window size")->capture_default_str();
  cmd->add_option("--dropout", a.mc.dropout, "Dropout rate on the representation")->capture_default_str();
  cmd->add_option("--lr", a.tc.optimizer.learning_rate, "Adadelta learning rate")->capture_default_str();
  cmd->add_option("--rho", a.tc.optimizer.rho, "Adadelta decay")->capture_default_str();
  cmd->add_option("--epsilon", a.tc.optimizer.epsilon, "Adadelta epsilon")->capture_default_str();
  cmd->add_option("--batch-size", a.tc.batch_size, "Mini-batch size")->capture_default_str();
  cmd->add_option("--max-epochs", a.tc.max_epochs, "Epoch budget")->capture_default_str();
  cmd->add_option("--patience", a.tc.patience, "Epochs without dev improvement before stopping")
      ->capture_default_str();
  cmd->add_option("--negative-ratio", a.tc.negative_ratio,
                  "Negatives kept per positive each epoch (0 keeps all)")
      ->capture_default_str();
  cmd->add_option("--attention-dim", a.mc.attention_dim, "Attention projection width")->capture_default_str();
  cmd->add_option("--ffn-hidden", a.mc.ffn_hidden, "Hidden width of the classifier (0: none)")
      ->capture_default_str();
  cmd->add_option("--position-dim", a.mc.position_dim, "Position embedding width")->capture_default_str();
  cmd->add_option("--max-offset", a.mc.max_offset, "Largest distinct relative position")->capture_default_str();
  cmd->add_option("--init-scale", a.mc.init_scale, "Uniform initialization range")->capture_default_str();
  cmd->add_option("--cnn-activation", a.cnn_act, "tanh, sigmoid, relu or identity")->capture_default_str();
  cmd->add_option("--attention-activation", a.att_act, "Nonlinearity for u_i and c")->capture_default_str();
  cmd->add_option("--cfa-activation", a.cfa_act, "Nonlinearity for gamma and beta")->capture_default_str();
  cmd->add_option("--ffn-activation", a.ffn_act, "Hidden-layer nonlinearity")->capture_default_str();
  cmd->add_option("--cfa-last-layer", a.mc.cfa_last_layer, "Condition the last layer's output too")
      ->capture_default_str();
  cmd->add_flag("--finetune-words", a.mc.finetune_words, "Train word vectors seen in the training data");
  cmd->add_option("--oov-policy", a.oov_policy, "zero or random-fixed")->capture_default_str();
  cmd->add_option("--window-radius", a.window_radius, "Baseline context radius around the anchor")
      ->capture_default_str();
  cmd->add_option("--threads", a.tc.eval_threads, "Threads for dev evaluation")->capture_default_str();
  cmd->add_flag("--sweep-layers", a.sweep_layers, "Train with 1..4 layers and keep the dev-best");
}

std::vector<LFKExample> load_split(const fs::path &dir, const std::string &name, bool required) {
  const fs::path p = dir / name;
  if (!fs::exists(p)) {
    if (required) throw InputError("missing '" + p.string() + "'");
    return {};
  }
  return io::read_examples(p.string());
}

std::vector<std::string> training_vocab(const std::vector<LFKExample> &data) {
  std::vector<std::string> v;
  for (const auto &e : data) {
    v.insert(v.end(), e.tokens.begin(), e.tokens.end());
    v.insert(v.end(), e.keywords.begin(), e.keywords.end());
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void write_log(const std::string &path, const std::vector<EpochLog> &log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  for (const auto &l : log) out << l.to_json().dump() << '\n';
}

ordered_json result_summary(const TrainResult &r) {
  return {{"best_epoch", r.best_epoch},
          {"epochs_run", r.log.size()},
          {"initial_train_loss", r.initial_loss},
          {"best_dev", r.best_dev.to_json()}};
}

int run_train(CLI::App &cmd, TrainArgs &a) {
  if (!a.config.empty()) apply_json_config(cmd, a.config);
  for (const auto *name : {"--data-dir", "--embeddings", "--out"}) {
    if (cmd.get_option(name)->count() == 0) {
      throw InputError(std::string(name) + " is required (on the command line or in --config)");
    }
  }
  a.mc.cnn_activation = ad::parse_activation(a.cnn_act);
  a.mc.attention_activation = ad::parse_activation(a.att_act);
  a.mc.cfa_activation = ad::parse_activation(a.cfa_act);
  a.mc.ffn_activation = ad::parse_activation(a.ffn_act);
  const bool baseline = a.model == "word2vec-baseline";
  if (!baseline) a.mc.set_variant(a.model);
  a.mc.validate();
  a.tc.seed = a.seed;
  a.tc.validate();
  if (baseline && a.sweep_layers) throw InputError("--sweep-layers applies to the CNN models only");

  const fs::path data(a.data_dir);
  const auto train_set = load_split(data, "train.jsonl", true);
  const auto dev_set = load_split(data, "dev.jsonl", true);
  const OovPolicy oov = parse_oov_policy(a.oov_policy);
  const std::uint64_t oov_seed = derive_seed(a.seed, "oov");
  const EmbeddingTable emb = load_embeddings(a.embeddings, 0, oov, oov_seed);
  EmbeddingRef ref{a.embeddings, emb.dim(), oov, oov_seed, sha256_file(a.embeddings)};

  ensure_dir(a.out);
  const fs::path out(a.out);
  RunManifest manifest("train", LFK_VERSION);
  manifest.set_seed(a.seed);
  ordered_json cfg;
  cfg["model"] = baseline ? ordered_json{{"model", a.model}, {"window_radius", a.window_radius}}
                          : a.mc.to_json();
  cfg["train"] = a.tc.to_json();
  cfg["oov_policy"] = a.oov_policy;
  cfg["sweep_layers"] = a.sweep_layers;
  manifest.set_config(cfg);
  manifest.add_input("train", (data / "train.jsonl").string());
  manifest.add_input("dev", (data / "dev.jsonl").string());
  manifest.add_input("embeddings", a.embeddings);
  if (!a.config.empty()) manifest.add_input("config", a.config);

  auto progress = [](const EpochLog &l) {
    std::cerr << "epoch " << l.epoch << "  loss " << l.train_loss << "  dev F1 " << percent1(l.dev_f1)
              << "\n";
  };
  const std::string ck_path = join(out, "checkpoint.json");
  ordered_json summary;
  if (baseline) {
    Word2VecBaseline model(emb, a.seed, a.mc.init_scale, a.window_radius);
    const TrainResult r = train(model, train_set, dev_set, a.tc, progress);
    Checkpoint ck = make_checkpoint(model, ref);
    ck.metadata = {{"best_epoch", r.best_epoch}, {"window", "anchor +- " + std::to_string(a.window_radius)}};
    write_checkpoint(ck, ck_path);
    write_log(join(out, "train_log.jsonl"), r.log);
    summary = result_summary(r);
  } else {
    std::vector<std::size_t> depths = {a.mc.layers};
    if (a.sweep_layers) depths = {1, 2, 3, 4};
    std::optional<Checkpoint> best;
    double best_f1 = -1.0;
    ordered_json sweep = ordered_json::array();
    for (std::size_t m : depths) {
      ModelConfig mc = a.mc;
      mc.layers = m;
      CnnModel model(mc, emb, a.seed);
      model.set_finetune_vocab(training_vocab(train_set));
      if (a.sweep_layers) std::cerr << "-- layers " << m << "\n";
      const TrainResult r = train(model, train_set, dev_set, a.tc, progress);
      write_log(join(out, a.sweep_layers ? "train_log_m" + std::to_string(m) + ".jsonl" : "train_log.jsonl"),
                r.log);
      ordered_json s = result_summary(r);
      s["layers"] = m;
      sweep.push_back(s);
      if (r.best_dev.f1 > best_f1) {
        best_f1 = r.best_dev.f1;
        best = make_checkpoint(model, ref);
        best->metadata = {{"best_epoch", r.best_epoch}, {"layers", m}};
      }
    }
    write_checkpoint(*best, ck_path);
    if (a.sweep_layers) {
      summary = {{"selected_layers", best->metadata["layers"]}, {"runs", sweep}};
      for (std::size_t m : depths) manifest.add_output(join(out, "train_log_m" + std::to_string(m) + ".jsonl"));
    } else {
      summary = sweep.front();
    }
  }
  write_json(join(out, "train_summary.json"), summary);
  manifest.add_output(ck_path);
  if (!a.sweep_layers) manifest.add_output(join(out, "train_log.jsonl"));
  manifest.add_output(join(out, "train_summary.json"));
  manifest.write(join(out, "run_manifest.json"));
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string checkpoint, data, embeddings, out;
  unsigned threads = 1;
  bool predictions = false;
};

void add_eval(CLI::App &app, EvalArgs &a) {
  auto *cmd = app.add_subcommand("eval", "Score a checkpoint on an LFK dataset");
  cmd->add_option("--checkpoint", a.checkpoint, "Checkpoint written by train")->required()->check(CLI::ExistingFile);
  cmd->add_option("--data", a.data, "LFK dataset (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--embeddings", a.embeddings,
                  "Embeddings file; defaults to the path recorded in the checkpoint");
  cmd->add_option("--out", a.out, "Directory for eval_report.json and the manifest");
  cmd->add_option("--threads", a.threads, "Evaluation threads")->capture_default_str();
  cmd->add_flag("--predictions", a.predictions, "Include per-example predictions in the report");
}

std::string resolve_embeddings(const EvalArgs &a, const Checkpoint &ck) {
  if (!a.embeddings.empty()) return a.embeddings;
  const fs::path recorded(ck.embeddings.path);
  if (recorded.is_absolute() || fs::exists(recorded)) return recorded.string();
  const fs::path beside = fs::path(a.checkpoint).parent_path() / recorded;
  if (fs::exists(beside)) return beside.string();
  throw InputError("embeddings '" + ck.embeddings.path + "' recorded in the checkpoint not found; pass --embeddings");
}

int run_eval(const EvalArgs &a) {
  const Checkpoint ck = read_checkpoint(a.checkpoint);
  const auto data = io::read_examples(a.data);
  if (data.empty()) throw InputError("dataset '" + a.data + "' is empty");
  const std::string emb_path = resolve_embeddings(a, ck);
  const std::string digest = sha256_file(emb_path);
  if (!ck.embeddings.digest.empty() && digest != ck.embeddings.digest) {
    warn("embeddings '" + emb_path + "' differ from the file used for training");
  }
  const EmbeddingTable emb =
      load_embeddings(emb_path, ck.embeddings.dim, ck.embeddings.oov_policy, ck.embeddings.oov_seed);
  EvalReport report;
  std::string label;
  if (ck.kind == "word2vec-baseline") {
    const Word2VecBaseline model = load_baseline(ck, emb);
    report = evaluate(model, data, a.predictions, a.threads);
    label = "word2vec-baseline";
  } else {
    const CnnModel model = load_cnn(ck, emb);
    report = evaluate(model, data, a.predictions, a.threads);
    label = model.config().variant();
  }
  std::cout << format_report_table(label, report);
  if (!a.out.empty()) {
    ensure_dir(a.out);
    const fs::path out(a.out);
    RunManifest manifest("eval", LFK_VERSION);
    manifest.set_seed(ck.seed);
    manifest.set_config({{"threads", a.threads}, {"predictions", a.predictions}});
    manifest.add_input("checkpoint", a.checkpoint);
    manifest.add_input("data", a.data);
    manifest.add_input("embeddings", emb_path);
    ordered_json j;
    j["model"] = label;
    j["data"] = fs::path(a.data).filename().string();
    j["report"] = report.to_json();
    write_json(join(out, "eval_report.json"), j);
    manifest.add_output(join(out, "eval_report.json"));
    manifest.write(join(out, "run_manifest.json"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradArgs {
  std::string config;
  std::uint64_t seed = 1;
  double tolerance = 1e-4;
};

void add_grad(CLI::App &app, GradArgs &a) {
  auto *cmd = app.add_subcommand("gradcheck",
                                 "Compare backprop gradients with finite differences on a tiny model");
  cmd->add_option("--config", a.config, "JSON model config overriding the tiny defaults")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_option("--tolerance", a.tolerance, "Largest accepted relative error")->capture_default_str();
}

// d=8 embeddings, u=4 position features, 3 filters of widths {2,3}, two
// layers, five-token sentences.
ModelConfig tiny_config() {
  ModelConfig c;
  c.windows = {2, 3};
  c.filters = 3;
  c.layers = 2;
  c.position_dim = 4;
  c.max_offset = 3;
  c.attention_dim = 5;
  c.ffn_hidden = 6;
  c.dropout = 0.0;
  c.init_scale = 0.5;
  return c;
}

int run_grad(const GradArgs &a) {
  ModelConfig base = tiny_config();
  if (!a.config.empty()) {
    nlohmann::json j = tiny_config().to_json();
    j.update(io::parse_json_file(a.config));
    base = ModelConfig::from_json(j);
    base.dropout = 0.0;
  }
  Rng rng = Rng(a.seed).substream("gradcheck");
  std::vector<std::string> vocab;
  for (int i = 0; i < 12; ++i) vocab.push_back("w" + std::to_string(i));
  EmbeddingTable emb(8, OovPolicy::kRandomFixed, a.seed);
  for (const auto &w : vocab) {
    std::vector<double> v(8);
    for (double &x : v) x = rng.uniform(-1.0, 1.0);
    emb.set(w, v);
  }
  std::vector<LFKExample> batch;
  for (int label = 0; label < 2; ++label) {
    LFKExample ex;
    for (int i = 0; i < 5; ++i) ex.tokens.push_back(vocab[rng.below(vocab.size())]);
    ex.anchor = rng.below(5);
    for (int k = 0; k < 4; ++k) ex.keywords.push_back(vocab[rng.below(vocab.size())]);
    ex.label = label;
    batch.push_back(ex);
  }
  bool ok = true;
  ordered_json results = ordered_json::array();
  for (const char *variant : {"concat", "attention", "concat-cfa", "attention-cfa"}) {
    ModelConfig cfg = base;
    cfg.set_variant(variant);
    CnnModel model(cfg, emb, a.seed);
    auto loss = [&](Tape &tape) {
      Tensor total;
      for (const auto &ex : batch) {
        Tensor l = ad::cross_entropy(tape, model.forward(tape, ex, Mode::kEval), ex.label);
        total = total.defined() ? ad::add(tape, total, l) : l;
      }
      return total;
    };
    // Whole-model gradients go down to 1e-9, where a plain h=1e-5 central
    // difference is dominated by cancellation noise. A fourth-order stencil
    // tolerates wider steps: 1e-3 for the smooth attention heads, 1e-4 where
    // max pooling has kinks.
    const bool smooth = cfg.head == Head::kAttention;
    const auto r = smooth ? ad::gradcheck(loss, model.params(), 1e-3, 1e-8, ad::Stencil::kFourthOrder)
                          : ad::gradcheck(loss, model.params(), 1e-4, 1e-8, ad::Stencil::kFourthOrder);
    const bool pass = r.max_rel_error < a.tolerance;
    ok = ok && pass;
    std::printf("%-14s max rel. error %.3e over %zu entries (worst %s[%zu]: analytic %.6e, numeric %.6e) %s\n",
                variant, r.max_rel_error, r.checked, r.worst_param.c_str(), r.worst_index, r.worst_analytic,
                r.worst_numeric, pass ? "ok" : "FAIL");
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace
}  // namespace lfk::cli

int main(int argc, char **argv) {
  using namespace lfk::cli;
  CLI::App app("Learning-from-keywords event detection toolkit", "lfk");
  app.set_version_flag("--version", LFK_VERSION);
  app.require_subcommand(1);
  SynthArgs synth_args;
  GenArgs gen_args;
  TrainArgs train_args;
  EvalArgs eval_args;
  GradArgs grad_args;
  add_synth(app, synth_args);
  add_gen(app, gen_args);
  add_train(app, train_args);
  add_eval(app, eval_args);
  add_grad(app, grad_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "synth") return run_synth(synth_args);
    if (name == "gen-data") return run_gen(gen_args);
    if (name == "train") return run_train(*app.get_subcommand("train"), train_args);
    if (name == "eval") return run_eval(eval_args);
    if (name == "gradcheck") return run_grad(grad_args);
  } catch (const lfk::NumericError &e) {
    std::cerr << "lfk: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const lfk::InputError &e) {
    std::cerr << "lfk: " << e.what() << "\n";
    return kExitInput;
  } catch (const lfk::ShapeError &e) {
    std::cerr << "lfk: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "lfk: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
