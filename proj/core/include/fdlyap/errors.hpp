// Copyright 2026 The fdlyap Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdlyap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible Hilbert-space dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A physical invariant (hermiticity, unit trace, positivity, POVM
/// completeness, saturation) does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The numerical integrator lost trace or produced non-finite entries.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (not valid JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document that does not follow the configuration schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A closed-loop run aborted; carries the sampling index at which it failed.
class LoopError : public Error {
 public:
  LoopError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace fdlyap
