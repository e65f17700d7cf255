/*
 * Copyright 2026 The rfidqv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfidqv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to converge or a linear system was singular.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The chain does not have the structure a query requires (e.g. several
/// bottom components for a long-run query).
class UnsupportedStructure : public Error {
 public:
  UnsupportedStructure(const std::string& what, std::vector<std::vector<std::size_t>> components = {})
      : Error(what), components_(std::move(components)) {}
  const std::vector<std::vector<std::size_t>>& components() const { return components_; }

 private:
  std::vector<std::vector<std::size_t>> components_;
};

/// Syntax error with a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column, std::vector<std::string> expected = {})
      : Error(format(message, line, column, expected)),
        message_(message),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column,
                            const std::vector<std::string>& expected) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// Model construction failed (variable out of range, probabilities not
/// summing to one, unknown identifier).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (state count, step cap) was exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace rfidqv
