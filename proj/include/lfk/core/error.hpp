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

#ifndef LFK_CORE_ERROR_HPP
#define LFK_CORE_ERROR_HPP

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>

namespace lfk {

// Tensor shapes disagree with what an operation requires.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad user input: invalid files, flags, configuration or arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A text file could not be parsed; carries the offending location.
class ParseError : public InputError {
 public:
  ParseError(const std::string &file, std::size_t line, const std::string &what)
      : InputError(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string &file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// Example synthesis impossible with the provided lexicon.
class GenerationError : public InputError {
 public:
  using InputError::InputError;
};

// A contract between components was broken (e.g. stepping without grads).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Training diverged: non-finite loss or parameters.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(const std::string &)>;

inline WarningHandler &warning_handler() {
  static WarningHandler handler = [](const std::string &msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}

inline void warn(const std::string &msg) {
  if (warning_handler()) warning_handler()(msg);
}

}  // namespace lfk

#endif  // LFK_CORE_ERROR_HPP
