// Copyright 2026 The incore Authors.
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

#ifndef INCORE_ERRORS_H_
#define INCORE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace incore {

// Base class for all errors caused by bad input (files, kernels, arguments).
// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated internal invariant. The CLI maps these to exit code 2.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed machine-model or data file. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A loaded model whose contents break a model invariant.
class ModelError : public Error {
 public:
  using Error::Error;
};

class UnknownInstruction : public Error {
 public:
  UnknownInstruction(const std::string& form, std::vector<std::string> nearest)
      : Error(Format(form, nearest)), form_(form), nearest_(std::move(nearest)) {}
  const std::string& form() const { return form_; }
  const std::vector<std::string>& nearest() const { return nearest_; }

 private:
  static std::string Format(const std::string& form,
                            const std::vector<std::string>& nearest) {
    std::string msg = "unknown instruction form '" + form + "'";
    if (!nearest.empty()) {
      msg += " (nearest:";
      for (const auto& n : nearest) msg += " " + n;
      msg += ")";
    }
    return msg;
  }
  std::string form_;
  std::vector<std::string> nearest_;
};

class AmbiguousForm : public Error {
 public:
  using Error::Error;
};

enum class MarkerProblem { kMissing, kMultiple, kEmptyRegion };

class MarkerError : public Error {
 public:
  MarkerError(MarkerProblem problem, const std::string& what)
      : Error(what), problem_(problem) {}
  MarkerProblem problem() const { return problem_; }

 private:
  MarkerProblem problem_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace incore

#endif  // INCORE_ERRORS_H_
