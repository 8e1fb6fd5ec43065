//
// Copyright 2026 The perp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PERP_ERRORS_H_
#define PERP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace perp {

// Root of every error thrown by the library. The CLI maps the concrete
// subclass to a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// An operation that is not allowed in the object's current state, e.g. a
// query to a mechanism that already halted.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (labels outside {0,1}, dimension mismatch, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration. The message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The phase-parameter resolver could not satisfy its inequalities.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace perp

#endif  // PERP_ERRORS_H_
