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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "smoothbv/characters.hpp"
#include "smoothbv/multfn.hpp"
#include "smoothbv/smooth_sieve.hpp"

namespace smoothbv {

using Rational = boost::rational<std::int64_t>;

// f(n) for 1 <= n <= x, plus the ascending list of n with f(n) != 0.
class FunctionTable {
 public:
  FunctionTable(const MultFn& f, const SieveTable& table, std::uint64_t x);

  // The all-zero sequence on 1..x. Not multiplicative; fn() only labels it.
  static FunctionTable zero(std::uint64_t x);

  const MultFn& fn() const { return f_; }
  std::uint64_t x() const { return x_; }
  Complex operator[](std::uint64_t n) const { return values_[n]; }
  std::span<const Complex> values() const { return values_; }  // index 0 unused
  std::span<const std::uint32_t> support() const { return support_; }

  // B_r = sum_{n <= X, n = r (q)} f(n) for r = 0..q-1, each summed pairwise
  // in ascending n.
  std::vector<Complex> residue_sums(std::uint64_t X, std::uint64_t q) const;

 private:
  FunctionTable(MultFn f, std::uint64_t x) : f_(std::move(f)), x_(x), values_(x + 1) {}

  MultFn f_;
  std::uint64_t x_;
  std::vector<Complex> values_;
  std::vector<std::uint32_t> support_;
};

struct ExceptionalMember {
  DirichletCharacter psi;
  std::uint64_t witness_X = 0;
  double witness_value = 0.0;
  double threshold = 0.0;
};

// A set of primitive characters with optional witness data.
class ExceptionalSet {
 public:
  ExceptionalSet() = default;
  static ExceptionalSet of(const std::vector<DirichletCharacter>& chars);

  // Throws DomainError for an imprimitive character. Duplicates are ignored.
  void add(ExceptionalMember m);
  void add(const DirichletCharacter& psi) { add(ExceptionalMember{psi}); }

  const std::vector<ExceptionalMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const DirichletCharacter& psi) const;

  // Members whose conductor divides q.
  std::vector<DirichletCharacter> dividing(std::uint64_t q) const;

  double beta() const;            // sum 1/r
  double weighted_count() const;  // sum r^{-1/2}

 private:
  std::vector<ExceptionalMember> members_;
};

struct BetaStats {
  double beta = 0.0;
  double weighted_count = 0.0;
};
BetaStats beta_stats(const ExceptionalSet& xi);

struct DiscrepancyRecord {
  std::uint64_t q = 1;
  std::int64_t a1 = 1;
  std::int64_t a2 = 1;
  std::uint64_t b = 0;  // a1 * a2^{-1} mod q
  Complex progression_sum{};
  Complex coprime_main_term{};
  Complex delta{};
  std::optional<Complex> xi_main_term;
  std::optional<Complex> delta_xi;
  std::optional<Complex> delta_A;
};

// sum_{n <= X} f(n) conj(chi(n)).
Complex character_sum(const FunctionTable& ft, std::uint64_t X, const DirichletCharacter& chi);
Complex character_sum(const MultFn& f, std::uint64_t X, const DirichletCharacter& chi,
                      const SieveTable& table);

Complex delta(const FunctionTable& ft, std::uint64_t x, std::uint64_t q, std::int64_t a);

// Full record with delta and delta_xi; xi_main_term uses the members of xi
// whose conductor divides q, induced to q.
DiscrepancyRecord discrepancy_record(const FunctionTable& ft, std::uint64_t x, std::uint64_t q,
                                     std::int64_t a1, std::int64_t a2, const ExceptionalSet& xi);

Complex delta_xi(const FunctionTable& ft, std::uint64_t x, std::uint64_t q, std::int64_t a1,
                 std::int64_t a2, const ExceptionalSet& xi);
inline Complex delta_xi(const FunctionTable& ft, std::uint64_t x, std::uint64_t q,
                        std::int64_t a, const ExceptionalSet& xi) {
  return delta_xi(ft, x, q, a, 1, xi);
}

// [n = 1 (q)] - (1/phi(q)) sum_{d <= D, d | (q, n-1)} phi(d) sum_{b <= D/d, b | q/d} mu(b),
// and 0 when gcd(n, q) > 1.
Rational u_kernel_moebius(std::int64_t n, std::uint64_t q, std::uint64_t D);
std::vector<Rational> u_kernel_moebius_table(std::uint64_t q, std::uint64_t D);

// [n = 1 (q)] - (1/phi(q)) sum over chi mod q of conductor <= D of chi(n).
Complex u_kernel_chardef(std::int64_t n, std::uint64_t q, std::uint64_t D,
                         const CharacterFamily& family);
std::vector<Complex> u_kernel_chardef_table(std::uint64_t q, std::uint64_t D,
                                            const CharacterFamily& family);

Complex delta_A(const FunctionTable& ft, std::uint64_t x, std::uint64_t q, std::int64_t a1,
                std::int64_t a2, std::uint64_t D);

struct BvAverage {
  double total = 0.0;
  std::vector<DiscrepancyRecord> records;  // ascending q
};

// sum over q <= Q with gcd(q, a1 a2) = 1 of |delta_xi|.
BvAverage bv_average(const FunctionTable& ft, std::uint64_t x, std::uint64_t Q,
                     std::int64_t a1, std::int64_t a2, const ExceptionalSet& xi,
                     unsigned threads = 1);

struct IdentityCheck {
  Complex lhs{};
  Complex rhs{};
  double residual = 0.0;
};

// lhs = delta_xi - delta_A; rhs is the expansion over l supported on the
// primes of q, weighted by the Dirichlet inverse g of f, of delta_xi at the
// divisors d <= D of q. Needs every member of xi to have conductor <= D.
IdentityCheck verify_transfer_identity(const FunctionTable& ft, std::uint64_t x,
                                       std::uint64_t q, std::int64_t a1, std::int64_t a2,
                                       const ExceptionalSet& xi, std::uint64_t D);

// S_f(x, chi) against sum_m h(m) S_f(x/m, psi), psi the primitive character
// inducing chi and m running over integers built from primes p | q, p !| r.
IdentityCheck verify_convolution_identity(const FunctionTable& ft, std::uint64_t x,
                                          const DirichletCharacter& chi);

}  // namespace smoothbv
