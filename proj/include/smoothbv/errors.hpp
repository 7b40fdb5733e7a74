// Copyright 2026 The smoothbv Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace smoothbv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (gcd violations,
// non-invertible residues, empty prime sums).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Query past the end of a precomputed table.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Request that would exceed a documented memory or work cap.
class SizingError : public Error {
 public:
  using Error::Error;
};

// A multiplicative function oracle has no value at a required prime power.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Persistent cache failed its audit.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace smoothbv
