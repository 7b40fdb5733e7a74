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

#include "smoothbv/cyclotomic.hpp"

#include <map>
#include <mutex>

#include "smoothbv/arith.hpp"
#include "smoothbv/errors.hpp"

namespace smoothbv {

namespace {

using Poly = std::vector<std::int64_t>;

// Exact division of integer polynomials with monic divisor.
Poly divide_exact(Poly num, const Poly& den) {
  const std::size_t dn = den.size() - 1;
  Poly quot(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const std::int64_t c = num[i];
    quot[i - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return quot;
}

}  // namespace

const Poly& cyclotomic_polynomial(std::uint64_t n) {
  static std::mutex mu;
  static std::map<std::uint64_t, Poly> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  if (n == 0) throw DomainError("cyclotomic_polynomial: n = 0");
  Poly p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (const std::uint64_t d : divisors(n)) {
    if (d == n) break;
    p = divide_exact(p, cyclotomic_polynomial(d));
  }
  std::lock_guard lock(mu);
  return cache.emplace(n, std::move(p)).first->second;
}

CyclotomicInteger::CyclotomicInteger(std::uint64_t order)
    : order_(order), coeffs_(order, 0) {
  if (order == 0) throw DomainError("CyclotomicInteger: order 0");
}

void CyclotomicInteger::add_root(std::uint64_t k, std::uint64_t m,
                                 std::int64_t coeff) {
  if (m == 0 || order_ % m != 0)
    throw DomainError("CyclotomicInteger: root order does not divide field order");
  coeffs_[(k % m) * (order_ / m)] += coeff;
}

std::vector<std::int64_t> CyclotomicInteger::canonical() const {
  const Poly& phi = cyclotomic_polynomial(order_);
  const std::size_t deg = phi.size() - 1;
  Poly r = coeffs_;
  for (std::size_t i = r.size(); i-- > deg;) {
    const std::int64_t c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  r.resize(deg);
  return r;
}

bool CyclotomicInteger::is_zero() const {
  for (const auto c : canonical())
    if (c != 0) return false;
  return true;
}

bool CyclotomicInteger::equals_integer(std::int64_t c) const {
  CyclotomicInteger diff = *this;
  diff.add_integer(-c);
  return diff.is_zero();
}

CyclotomicInteger CyclotomicInteger::operator*(const CyclotomicInteger& other) const {
  if (order_ != other.order_)
    throw DomainError("CyclotomicInteger: mismatched orders");
  CyclotomicInteger out(order_);
  for (std::uint64_t i = 0; i < order_; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::uint64_t j = 0; j < order_; ++j)
      out.coeffs_[(i + j) % order_] += coeffs_[i] * other.coeffs_[j];
  }
  return out;
}

}  // namespace smoothbv
