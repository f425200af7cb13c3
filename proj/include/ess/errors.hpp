// Copyright 2026 The ESS Games Authors.
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

#ifndef ESS_ERRORS_HPP_
#define ESS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ess {

// Every error raised by the library derives from Error. The C API maps each
// subclass onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A partition, state or argument that breaks a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation applied to a game state it is not defined on (e.g. a move on
// a finished game).
class StateError : public Error {
 public:
  using Error::Error;
};

// Integer arithmetic would leave the supported range.
class ArithmeticBoundError : public Error {
 public:
  using Error::Error;
};

// Bad configuration: unknown names, inconsistent K, missing files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training or evaluation produced an unusable result (NaN, overflow).
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ess

#endif  // ESS_ERRORS_HPP_
