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

#include <cstdint>
#include <vector>

namespace smoothbv {

// An element of Z[zeta_M], accumulated as an integer combination of M-th
// roots of unity. canonical() reduces modulo the M-th cyclotomic polynomial,
// giving a unique coefficient vector of length phi(M), so equality and
// zero tests are exact.
class CyclotomicInteger {
 public:
  explicit CyclotomicInteger(std::uint64_t order);

  std::uint64_t order() const { return order_; }

  // Adds coeff * e(k/m); m must divide order().
  void add_root(std::uint64_t k, std::uint64_t m, std::int64_t coeff = 1);
  void add_integer(std::int64_t c) { add_root(0, 1, c); }

  std::vector<std::int64_t> canonical() const;
  bool is_zero() const;
  bool equals_integer(std::int64_t c) const;

  CyclotomicInteger operator*(const CyclotomicInteger& other) const;

 private:
  std::uint64_t order_;
  std::vector<std::int64_t> coeffs_;  // over x^j, j < order, mod x^M - 1
};

// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::uint64_t n);

}  // namespace smoothbv
