// Copyright 2026 The subkit Authors
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

#ifndef SUBKIT_ERROR_HPP
#define SUBKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subkit {

/// Base of every error the library throws.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when one applies
/// (0 means "no specific line").
class FormatError : public Error {
  public:
    explicit FormatError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A value violates a structural invariant (empty block, bad timestamps, ...).
class StructureError : public Error {
  public:
    using Error::Error;
};

/// Inputs are individually valid but do not fit together
/// (sentence-count mismatch, missing duration, empty corpus).
class MismatchError : public Error {
  public:
    using Error::Error;
};

/// Transcript tokens cannot be paired with timed words.
class AlignmentError : public MismatchError {
  public:
    using MismatchError::MismatchError;
};

} // namespace subkit

#endif
