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

#ifndef LFK_TOOLS_RUN_MANIFEST_HPP
#define LFK_TOOLS_RUN_MANIFEST_HPP

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "digest.hpp"
#include "json.hpp"

namespace lfk::cli {

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Written next to every run's outputs. Everything except the timestamps is a
// function of the inputs, so two runs with equal manifests (timestamps aside)
// produce equal outputs.
class RunManifest {
 public:
  RunManifest(std::string subcommand, std::string version)
      : subcommand_(std::move(subcommand)), version_(std::move(version)), started_(utc_now()) {}

  void set_config(nlohmann::ordered_json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::string &role, const std::string &path) {
    inputs_.push_back({role, path});
  }
  void add_output(const std::string &path) { outputs_.push_back(path); }

  void write(const std::string &path) const {
    nlohmann::ordered_json j;
    j["tool"] = "lfk";
    j["version"] = version_;
    j["subcommand"] = subcommand_;
    j["seed"] = seed_;
    j["config"] = config_;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto &[role, p] : inputs_) {
      j["inputs"].push_back({{"role", role}, {"path", p}, {"sha256", sha256_file(p)}});
    }
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto &p : outputs_) {
      j["outputs"].push_back({{"path", std::filesystem::path(p).filename().string()},
                              {"sha256", sha256_file(p)}});
    }
    j["started_at"] = started_;
    j["finished_at"] = utc_now();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
  }

 private:
  std::string subcommand_;
  std::string version_;
  std::string started_;
  std::uint64_t seed_ = 0;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
};

}  // namespace lfk::cli

#endif  // LFK_TOOLS_RUN_MANIFEST_HPP
