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

#include "smoothbv/smooth_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smoothbv/errors.hpp"

namespace smoothbv {

SieveTable SieveTable::build(std::uint64_t x_max) {
  if (x_max == 0 || x_max > kMaxSieveLimit)
    throw SizingError("build_sieve: x_max = " + std::to_string(x_max) +
                      " outside [1, " + std::to_string(kMaxSieveLimit) + "]");
  SieveTable t;
  t.x_max_ = x_max;
  t.lpf_.assign(x_max + 1, 0);
  t.lpf_[1] = 1;
  // Ascending p overwrite earlier entries, so each slot ends at its largest prime.
  for (std::uint64_t p = 2; p <= x_max; ++p) {
    if (t.lpf_[p] != 0) continue;
    t.primes_.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p; m <= x_max; m += p)
      t.lpf_[m] = static_cast<std::uint32_t>(p);
  }
  return t;
}

std::uint32_t SieveTable::lpf(std::uint64_t n) const {
  if (n == 0 || n > x_max_)
    throw RangeError("lpf: n = " + std::to_string(n) + " outside [1, " +
                     std::to_string(x_max_) + "]");
  return lpf_[n];
}

std::vector<PrimePower> SieveTable::factorize(std::uint64_t n) const {
  std::vector<PrimePower> out;
  lpf(n);  // range check
  while (n > 1) {
    const std::uint32_t p = lpf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

void check_query(const SieveTable& table, std::uint64_t x, std::uint64_t y,
                 const char* op) {
  if (x > table.x_max())
    throw RangeError(std::string(op) + ": x = " + std::to_string(x) +
                     " exceeds sieve limit " + std::to_string(table.x_max()));
  if (y < 2) throw DomainError(std::string(op) + ": y must be >= 2");
}

template <class Pred>
std::uint64_t count_smooth(const SieveTable& table, std::uint64_t x,
                           std::uint64_t y, Pred&& keep) {
  const auto lpf = table.raw();
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= x; ++n)
    if (lpf[n] <= y && keep(n)) ++count;
  return count;
}

}  // namespace

std::uint64_t psi(const SieveTable& table, std::uint64_t x, std::uint64_t y) {
  check_query(table, x, y, "psi");
  return count_smooth(table, x, y, [](std::uint64_t) { return true; });
}

std::uint64_t psi_coprime(const SieveTable& table, std::uint64_t x, std::uint64_t y,
                          std::uint64_t q) {
  check_query(table, x, y, "psi_coprime");
  if (q == 0) throw DomainError("psi_coprime: q must be >= 1");
  return count_smooth(table, x, y,
                      [q](std::uint64_t n) { return std::gcd(n, q) == 1; });
}

std::uint64_t psi_progression(const SieveTable& table, std::uint64_t x,
                              std::uint64_t y, std::uint64_t a, std::uint64_t q) {
  check_query(table, x, y, "psi_progression");
  if (q == 0) throw DomainError("psi_progression: q must be >= 1");
  if (a >= q) throw DomainError("psi_progression: residue must satisfy 0 <= a < q");
  const auto lpf = table.raw();
  std::uint64_t count = 0;
  for (std::uint64_t n = a == 0 ? q : a; n <= x; n += q) count += lpf[n] <= y;
  return count;
}

double saddle_lhs(double alpha, std::uint64_t y) {
  double sum = 0.0;
  for (const std::uint32_t p : primes_up_to(y)) {
    const double lp = std::log(static_cast<double>(p));
    sum += lp / std::expm1(alpha * lp);
  }
  return sum;
}

double alpha_saddle(double x, std::uint64_t y) {
  if (y < 2) throw DomainError("alpha_saddle: y < 2 gives an empty prime sum");
  if (!(x > 1.0)) throw DomainError("alpha_saddle: x must exceed 1");
  const auto primes = primes_up_to(y);
  std::vector<double> logs;
  logs.reserve(primes.size());
  for (const auto p : primes) logs.push_back(std::log(static_cast<double>(p)));
  const double target = std::log(x);
  auto lhs = [&](double a) {
    double s = 0.0;
    for (const double lp : logs) s += lp / std::expm1(a * lp);
    return s;
  };
  double lo = 1e-6, hi = 4.0;
  if (lhs(lo) < target || lhs(hi) > target)
    throw DomainError("alpha_saddle: root not bracketed in [1e-6, 4]");
  // Bisect until the interval stops shrinking; far below the 1e-9 requirement.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lhs(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::uint64_t smooth_short_interval(const SieveTable& table, std::uint64_t x,
                                    std::uint64_t y, double T) {
  if (!(T > 0.0)) throw DomainError("smooth_short_interval: T must be positive");
  const auto step = static_cast<std::uint64_t>(std::floor(static_cast<double>(x) / T));
  if (x + step > table.x_max())
    throw RangeError("smooth_short_interval: x + x/T = " + std::to_string(x + step) +
                     " exceeds sieve limit " + std::to_string(table.x_max()));
  check_query(table, x + step, y, "smooth_short_interval");
  const auto lpf = table.raw();
  std::uint64_t count = 0;
  for (std::uint64_t n = x + 1; n <= x + step; ++n)
    if (lpf[n] <= y) ++count;
  return count;
}

std::vector<std::uint64_t> dyadic_partition(std::uint64_t x, double T, double eps) {
  if (x < 16) throw DomainError("dyadic_partition: x must be >= 16");
  if (!(T >= 1.0)) throw DomainError("dyadic_partition: T must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0))
    throw DomainError("dyadic_partition: eps must lie in (0, 1]");
  const double rel = eps / T;
  std::vector<std::uint64_t> grid{ceil_root(x, 4)};
  while (grid.back() < x) {
    const std::uint64_t cur = grid.back();
    const double target = rel * static_cast<double>(cur);
    const auto step =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(target)));
    const std::uint64_t next = cur + step >= x ? x : cur + step;
    if (next == x && grid.size() >= 2 &&
        static_cast<double>(x - cur) < 0.5 * std::max(1.0, target)) {
      grid.back() = x;  // fold the short tail into the previous step
      break;
    }
    grid.push_back(next);
    if (grid.size() > kMaxPartitionPoints)
      throw SizingError("dyadic_partition: more than " +
                        std::to_string(kMaxPartitionPoints) + " grid points");
  }
  return grid;
}

SmoothSet::SmoothSet(const SieveTable& table, std::uint64_t x, std::uint64_t y)
    : x_(x), y_(y) {
  check_query(table, x, y, "SmoothSet");
  const auto lpf = table.raw();
  for (std::uint64_t n = 1; n <= x; ++n)
    if (lpf[n] <= y) members_.push_back(static_cast<std::uint32_t>(n));
}

std::uint64_t SmoothSet::count_upto(std::uint64_t X) const {
  if (X > x_)
    throw RangeError("SmoothSet::count_upto: X = " + std::to_string(X) +
                     " exceeds " + std::to_string(x_));
  return static_cast<std::uint64_t>(
      std::upper_bound(members_.begin(), members_.end(), X) - members_.begin());
}

}  // namespace smoothbv
