// Copyright 2026 Priokin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIOKIN_ERRORS_HPP_
#define PRIOKIN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace priokin {

// Base class for all exceptions thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// A named entity (frame, joint, file section) does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A vector or matrix argument has the wrong size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument violates a documented precondition (non-unit axis,
// inverted limits, malformed weights).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A computation produced or encountered an invalid state (non-finite
// joint values, NaN poses).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A JSON document could not be parsed or fails schema validation.
// Messages carry the source name and, for syntax errors, the line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An optimization-based solve failed where the caller requires success
// (e.g. an infeasible cascade mid-run).
class SolverError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace priokin

#endif  // PRIOKIN_ERRORS_HPP_
