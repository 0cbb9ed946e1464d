// Copyright 2026 The fbsim Authors
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

#ifndef FBSIM_ERRORS_HPP
#define FBSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fbsim {

/// Raised when an input violates a declared invariant or precondition
/// (bad document, non-unitary matrix, mismatched registry, ...).
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a well-formed computation cannot proceed (singular point,
/// unclassifiable term, ...). The CLI maps this to exit code 2.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fbsim

#endif
