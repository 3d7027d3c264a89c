// Copyright 2026 The permanneal Authors
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

namespace permanneal {

// Error hierarchy. The CLI maps each kind onto a distinct exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, non-finite values, parse failures.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a hard size guard (factorial enumeration, qubit cap).
class SizeCapError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (eigensolver non-convergence, blow-up).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace permanneal
