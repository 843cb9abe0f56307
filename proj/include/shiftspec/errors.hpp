// Copyright 2026 The shiftspec Authors
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

namespace shiftspec {

// Base of every exception thrown by the library. The C API maps each
// subclass onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, invalid weights, inconsistent map parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Evaluation outside the region where a map or solver is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation not available for this kind of input (e.g. roots of a series).
class Unsupported : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold (e.g. simulating a non-J-class
// operator, eigenvector requested outside the point-spectrum disk).
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

// A numerical procedure ran out of budget or detected divergence.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftspec
