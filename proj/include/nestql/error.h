//
// Copyright 2026 The nestql Authors
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

#ifndef NESTQL_ERROR_H_
#define NESTQL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nestql {

// All library failures derive from Error; the CLI maps every one of them to
// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, size_t pos)
      : Error(what + " at offset " + std::to_string(pos)), pos_(pos) {}
  size_t pos() const { return pos_; }

 private:
  size_t pos_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

// Raised by value_equal when an operand violates the mode's precondition.
class EqualityModeError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// The node guard tripped (see EvalOptions::max_nodes).
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace nestql

#endif  // NESTQL_ERROR_H_
