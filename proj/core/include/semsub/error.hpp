// Copyright 2026 The semsub Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace semsub {

// Broad failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  kIo,
  kParse,
  kPrecondition,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

// Malformed input text. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(ErrorKind::kParse,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::kPrecondition, what) {}
};

class DimensionMismatch : public PreconditionError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : PreconditionError("dimension mismatch: expected " +
                          std::to_string(expected) + ", got " +
                          std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

}  // namespace semsub
