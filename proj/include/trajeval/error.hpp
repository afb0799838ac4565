// Copyright 2026 The trajeval Authors.
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

#ifndef TRAJEVAL_ERROR_HPP_
#define TRAJEVAL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trajeval {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or track dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (thresholds, window sizes, fps ratios...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A sequence has no prediction set (raised only in strict evaluation).
class MissingPredictionError : public Error {
 public:
  using Error::Error;
};

/// Optimization produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(int step, const std::string& what)
      : Error("diverged at step " + std::to_string(step) + ": " + what), step_(step) {}

  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace trajeval

#endif  // TRAJEVAL_ERROR_HPP_
