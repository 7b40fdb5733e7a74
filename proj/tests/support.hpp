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
#include <numeric>
#include <random>
#include <vector>

#include "smoothbv/arith.hpp"
#include "smoothbv/characters.hpp"

namespace testing {

// Hand-rolled generator on raw 64-bit draws.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t bits() { return rng_(); }
  // Uniform-ish integer in [lo, hi].
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + rng_() % (hi - lo + 1); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool coin() { return rng_() & 1; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[rng_() % v.size()]; }
  std::uint64_t unit_mod(std::uint64_t q) {
    for (;;) {
      const auto a = range(1, 10 * q + 10);
      if (std::gcd(a, q) == 1) return a;
    }
  }

 private:
  std::mt19937_64 rng_;
};

// Largest prime factor by trial division; 1 for n = 1.
inline std::uint64_t trial_lpf(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  return n > 1 ? n : best;
}

inline bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct BruteCounts {
  std::uint64_t all = 0, coprime = 0, progression = 0;
};

inline BruteCounts brute_counts(std::uint64_t x, std::uint64_t y, std::uint64_t q,
                                std::uint64_t a) {
  BruteCounts c;
  for (std::uint64_t n = 1; n <= x; ++n) {
    if (trial_lpf(n) > y) continue;
    ++c.all;
    if (std::gcd(n, q) == 1) ++c.coprime;
    if (n % q == a % q) ++c.progression;
  }
  return c;
}

}  // namespace testing
