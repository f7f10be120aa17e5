/*
 * Copyright 2026 The sysgraph Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SYSGRAPH_ERRORS_H_
#define SYSGRAPH_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sysgraph {

// Base of every error raised by the library. The CLI maps all of these to
// exit code 2 (data/validation error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed record in a text file. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A well-formed value that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The same (host, pid) observed with two different executable names.
class GraphConsistencyError : public Error {
 public:
  using Error::Error;
};

// Linear fit requested over workloads that are all equal.
class DegenerateWorkloadError : public Error {
 public:
  using Error::Error;
};

// File carries a format tag or version this build does not understand.
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Caller-side contract violations (empty corpus, empty selection, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sysgraph

#endif  // SYSGRAPH_ERRORS_H_
