/*
 * Copyright 2026 The mxpbf Authors
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

namespace mxpbf {

enum class ErrorKind {
  malformed_input,     // unparsable or non-rectangular table
  degenerate_data,     // zero-variance / zero-norm column
  invalid_covariance,  // not symmetric positive definite, or wrong dimension
  invalid_pair,        // i == j or index out of range
  invalid_parameter,   // hyperparameter or model parameter outside its domain
  domain,              // argument outside a function's domain
  collinearity,        // every scanned pair is numerically collinear
  degenerate_split,    // cross-validation split with a zero-norm test column
  io,                  // file cannot be opened / written
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mxpbf
