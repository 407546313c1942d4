/*
 * Copyright 2026 The kgp Authors
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

#include <stdexcept>
#include <string>

namespace kgp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range arguments (dimension mismatch, bad weights, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries the file name and line number.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Linear algebra broke down: singular systems, failed factorizations,
/// quadratic forms that came out negative beyond roundoff.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The hypothesis of an identity does not hold for the given arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

}  // namespace kgp
