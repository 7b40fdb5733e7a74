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
#include <span>
#include <vector>

#include "smoothbv/arith.hpp"

namespace smoothbv {

// Largest supported sieve limit. The table costs four bytes per integer, so
// the cap is about 400 MB of memory.
inline constexpr std::uint64_t kMaxSieveLimit = 100'000'000;

// Largest-prime-factor table P(n) for 1 <= n <= x_max, with P(1) = 1.
// Immutable after construction and safe to share between threads.
class SieveTable {
 public:
  // Throws SizingError when x_max is 0 or above kMaxSieveLimit.
  static SieveTable build(std::uint64_t x_max);

  std::uint64_t x_max() const { return x_max_; }
  std::uint32_t lpf(std::uint64_t n) const;
  bool is_smooth(std::uint64_t n, std::uint64_t y) const { return lpf(n) <= y; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  // Prime-power factorization by repeated division by P(n); primes ascending.
  std::vector<PrimePower> factorize(std::uint64_t n) const;

  std::span<const std::uint32_t> raw() const { return lpf_; }

 private:
  SieveTable() = default;
  std::uint64_t x_max_ = 0;
  std::vector<std::uint32_t> lpf_;  // lpf_[0] unused
  std::vector<std::uint32_t> primes_;
};

inline SieveTable build_sieve(std::uint64_t x_max) { return SieveTable::build(x_max); }

// Psi(x, y): number of y-smooth n <= x, counting n = 1.
std::uint64_t psi(const SieveTable& table, std::uint64_t x, std::uint64_t y);
// Psi_q(x, y): additionally gcd(n, q) = 1.
std::uint64_t psi_coprime(const SieveTable& table, std::uint64_t x, std::uint64_t y,
                          std::uint64_t q);
// Psi(x, y; a, q): additionally n = a (mod q). Raw count; (a, q) = 1 is not required.
std::uint64_t psi_progression(const SieveTable& table, std::uint64_t x,
                              std::uint64_t y, std::uint64_t a, std::uint64_t q);

// Saddle point: the alpha > 0 with sum_{p <= y} log p / (p^alpha - 1) = log x.
double alpha_saddle(double x, std::uint64_t y);

// Left-hand side of the saddle equation at alpha.
double saddle_lhs(double alpha, std::uint64_t y);

// Psi(x + floor(x/T), y) - Psi(x, y).
std::uint64_t smooth_short_interval(const SieveTable& table, std::uint64_t x,
                                    std::uint64_t y, double T);

// Work cap for dyadic_partition.
inline constexpr std::size_t kMaxPartitionPoints = 10'000'000;

// Grid ceil(x^{1/4}) = X_0 < X_1 < ... < X_J = x with steps ceil(eps X_j / T)
// (at least 1). A last step shorter than half its target is merged into the
// step before it.
std::vector<std::uint64_t> dyadic_partition(std::uint64_t x, double T, double eps);

// Sorted y-smooth integers n <= x; answers Psi(X, y) for any X <= x by binary
// search.
class SmoothSet {
 public:
  SmoothSet(const SieveTable& table, std::uint64_t x, std::uint64_t y);

  std::uint64_t x() const { return x_; }
  std::uint64_t y() const { return y_; }
  std::span<const std::uint32_t> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::uint64_t count_upto(std::uint64_t X) const;

 private:
  std::uint64_t x_;
  std::uint64_t y_;
  std::vector<std::uint32_t> members_;
};

}  // namespace smoothbv
