// Copyright 2026 The Authors.
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

#ifndef EDGESPONSOR_ERRORS_HPP_
#define EDGESPONSOR_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgesponsor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions or horizons between objects that must agree.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A sponsoring decision breaks exclusivity or the cache availability rule.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

// Invalid parameters: unnormalized distributions, negative budgets, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Requested request counts do not fit into the (user, slot) grid.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance exceeds the size cap.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace edgesponsor

#endif  // EDGESPONSOR_ERRORS_HPP_
