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

#include "smoothbv/arith.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "smoothbv/errors.hpp"

namespace smoothbv {

std::vector<PrimePower> factor_trial(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t phi = n;
  for (const auto& [p, e] : factor_trial(n)) phi = phi / p * (p - 1);
  return phi;
}

int mobius(std::uint64_t n) {
  if (n == 0) return 0;
  int mu = 1;
  for (const auto& pp : factor_trial(n)) {
    if (pp.e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::uint64_t num_divisors(std::uint64_t n) {
  std::uint64_t tau = 1;
  for (const auto& pp : factor_trial(n)) tau *= pp.e + 1;
  return tau;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  unsigned __int128 r = 1 % m;
  unsigned __int128 b = base % m;
  while (exp) {
    if (exp & 1) r = r * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t q) {
  const auto qq = static_cast<std::int64_t>(q);
  std::int64_t r = a % qq;
  if (r < 0) r += qq;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_inverse(std::int64_t a, std::uint64_t q) {
  if (q == 0) throw DomainError("mod_inverse: modulus 0");
  if (q == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(reduce_mod(a, q));
  std::int64_t r = static_cast<std::int64_t>(q);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1)
    throw DomainError("mod_inverse: " + std::to_string(a) +
                      " is not invertible modulo " + std::to_string(q));
  return reduce_mod(old_s, q);
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint32_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

std::uint64_t primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  const auto factors = factor_trial(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& pp : factors) {
      if (mod_pow(g, (p - 1) / pp.p, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw DomainError("primitive_root: " + std::to_string(p) + " is not prime");
}

namespace {

// True when r^k <= x, without overflow.
bool pow_le(std::uint64_t r, unsigned k, std::uint64_t x) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc *= r;
    if (acc > x) return false;
  }
  return true;
}

}  // namespace

std::uint64_t floor_root(std::uint64_t x, unsigned k) {
  if (k == 0) throw DomainError("floor_root: k = 0");
  if (k == 1 || x < 2) return x;
  auto r = static_cast<std::uint64_t>(
      std::pow(static_cast<long double>(x), 1.0L / k));
  while (r > 0 && !pow_le(r, k, x)) --r;
  while (pow_le(r + 1, k, x)) ++r;
  return r;
}

std::uint64_t ceil_root(std::uint64_t x, unsigned k) {
  if (x == 0) return 0;
  const std::uint64_t r = floor_root(x, k);
  return pow_le(r, k, x) && pow_le(r, k, x - 1) ? r + 1 : r;
}

Complex root_of_unity(std::uint64_t k, std::uint64_t m) {
  k %= m;
  if ((4 * k) % m == 0) {
    switch ((4 * k) / m) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

bool is_supported_on(std::uint64_t n, std::uint64_t q) {
  if (n == 0) return false;
  // Strip gcd repeatedly; what remains must be 1.
  std::uint64_t g;
  while ((g = std::gcd(n, q)) > 1) {
    while (n % g == 0) n /= g;
  }
  return n == 1;
}

}  // namespace smoothbv
