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

#ifndef LFK_TOOLS_JSON_CONFIG_HPP
#define LFK_TOOLS_JSON_CONFIG_HPP

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lfk/core/error.hpp"
#include "lfk/data/corpus.hpp"

namespace lfk::cli {

inline std::string scalar_text(const nlohmann::json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Fills options of `app` that were not given on the command line from a flat
// JSON object whose keys are long option names ("filters", "max-epochs").
// Command-line flags therefore override the file.
inline void apply_json_config(CLI::App &app, const std::string &path) {
  const nlohmann::json j = io::parse_json_file(path);
  if (!j.is_object()) throw InputError("config '" + path + "' must be a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (key == "config") continue;
    CLI::Option *opt = app.get_option_no_throw("--" + key);
    if (!opt) throw InputError("config '" + path + "': unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      std::vector<std::string> parts;
      for (const auto &e : value) parts.push_back(scalar_text(e));
      opt->add_result(parts);
    } else {
      opt->add_result(scalar_text(value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error &e) {
      throw InputError("config '" + path + "': bad value for '" + key + "': " + e.what());
    }
  }
}

}  // namespace lfk::cli

#endif  // LFK_TOOLS_JSON_CONFIG_HPP
