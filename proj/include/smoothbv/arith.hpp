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

#include <complex>
#include <cstdint>
#include <vector>

namespace smoothbv {

using Complex = std::complex<double>;

struct PrimePower {
  std::uint64_t p;
  unsigned e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Factorization by trial division, primes ascending. factor(1) is empty.
std::vector<PrimePower> factor_trial(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);
int mobius(std::uint64_t n);
std::uint64_t num_divisors(std::uint64_t n);

// Divisors of n in ascending order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Least nonnegative residue of a (possibly negative) modulo q.
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t q);

// Inverse of a modulo q by extended Euclid; throws DomainError when
// gcd(a, q) > 1. For q == 1 returns 0.
std::uint64_t mod_inverse(std::int64_t a, std::uint64_t q);

// Primes <= n, ascending (plain Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

// Smallest primitive root of an odd prime p.
std::uint64_t primitive_root(std::uint64_t p);

// floor(x^(1/k)) and ceil(x^(1/k)) computed exactly on integers.
std::uint64_t floor_root(std::uint64_t x, unsigned k);
std::uint64_t ceil_root(std::uint64_t x, unsigned k);

// e(k/m) = exp(2 pi i k/m), exact at multiples of 1/4.
Complex root_of_unity(std::uint64_t k, std::uint64_t m);

// Radical-style helper: true when every prime factor of n divides q.
bool is_supported_on(std::uint64_t n, std::uint64_t q);

}  // namespace smoothbv
