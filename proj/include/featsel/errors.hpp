// Copyright 2026 The Authors.
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

#ifndef FEATSEL_ERRORS_HPP_
#define FEATSEL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace featsel {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input vector was expected to have unit norm.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Cholesky factorization broke down. `pivot()` is the 0-based index of the
// first non-positive pivot.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("matrix is not positive definite (Cholesky failed at pivot " +
              std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// The eliminated block of a Schur complement is singular or too badly
// conditioned. For features this means the landmark cannot be triangulated.
class TriangulationFailure : public Error {
 public:
  explicit TriangulationFailure(double condition)
      : Error("eliminated block is singular or ill-conditioned (condition " +
              std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Wrong sizes, bad parameters, unknown ids.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ScenarioInfeasible : public Error {
 public:
  ScenarioInfeasible(std::size_t triangulable, std::size_t required)
      : Error("scenario infeasible: " + std::to_string(triangulable) +
              " triangulable features, budget q = " +
              std::to_string(required)),
        triangulable_(triangulable),
        required_(required) {}

  std::size_t triangulable() const noexcept { return triangulable_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t triangulable_;
  std::size_t required_;
};

// Exhaustive search refused because the instance is too large.
class GuardRefusal : public Error {
 public:
  using Error::Error;
};

}  // namespace featsel

#endif  // FEATSEL_ERRORS_HPP_
