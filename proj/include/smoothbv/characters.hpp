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
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "smoothbv/arith.hpp"

namespace smoothbv {

// Largest modulus accepted by enumerate_characters.
inline constexpr std::uint64_t kMaxCharacterModulus = 1'000'000;

// e(k/m) with 0 <= k < m.
struct RootOfUnity {
  std::uint64_t k;
  std::uint64_t m;
  Complex to_complex() const { return root_of_unity(k, m); }
  friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
    return a.k * b.m == b.k * a.m;
  }
};

// (Z/qZ)^* as a product of cyclic factors with CRT-lifted generators: one per
// odd prime power, and {-1} x <5> for 2^e, e >= 3 (just {-1} for e = 2).
// Discrete-log tables are shared by every character of the modulus.
class DirichletGroup {
 public:
  struct Generator {
    std::uint64_t component_modulus;  // p^e this factor lives in
    std::uint64_t lift;               // generator as a residue mod q
    std::uint64_t order;
    std::vector<std::int32_t> log;    // log[n mod p^e], -1 off units
  };

  // Cached per modulus; thread safe.
  static std::shared_ptr<const DirichletGroup> get(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  std::uint64_t phi() const { return phi_; }
  std::uint64_t exponent() const { return exponent_; }  // lcm of generator orders
  std::span<const Generator> generators() const { return gens_; }
  const std::vector<PrimePower>& factorization() const { return factors_; }

  // Discrete-log exponent of n in units of 1/exponent(), or -1 when
  // gcd(n, q) > 1, for the character with generator exponents j.
  std::int64_t value_exponent(std::span<const std::uint64_t> j, std::uint64_t n) const;

  bool is_unit(std::uint64_t n) const;

  explicit DirichletGroup(std::uint64_t q);

 private:
  std::uint64_t q_;
  std::uint64_t phi_;
  std::uint64_t exponent_;
  std::vector<PrimePower> factors_;
  std::vector<Generator> gens_;
};

// A Dirichlet character, stored as its exponent vector on the generators of
// DirichletGroup(q): chi(g_i) = e(j_i / ord_i). This basis is canonical, so
// two characters are equal exactly when their value tables agree.
class DirichletCharacter {
 public:
  // Character with the given generator exponents (each reduced mod ord_i).
  DirichletCharacter(std::shared_ptr<const DirichletGroup> group,
                     std::vector<std::uint64_t> exponents);

  // Trivial character modulo 1.
  static DirichletCharacter trivial();
  static DirichletCharacter principal(std::uint64_t q);

  std::uint64_t modulus() const { return group_->modulus(); }
  std::uint64_t order() const { return order_; }
  std::uint64_t conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  bool is_principal() const { return order_ == 1; }
  const DirichletGroup& group() const { return *group_; }
  std::span<const std::uint64_t> exponents() const { return exps_; }

  // Position in enumerate_characters(modulus()).
  std::uint64_t index() const;

  // nullopt where gcd(n, q) > 1.
  std::optional<RootOfUnity> value(std::uint64_t n) const;
  // k with chi(n) = e(k / order()), or -1 where gcd(n, q) > 1.
  std::int64_t exponent_at(std::uint64_t n) const;
  Complex operator()(std::uint64_t n) const;

  // Value tables over residues 0..q-1.
  std::vector<std::int32_t> exponent_table() const;
  std::vector<Complex> complex_table() const;

  DirichletCharacter conj() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b);
  friend bool operator<(const DirichletCharacter& a, const DirichletCharacter& b);

 private:
  std::shared_ptr<const DirichletGroup> group_;
  std::vector<std::uint64_t> exps_;
  std::uint64_t order_ = 1;
  std::uint64_t conductor_ = 1;
};

// Product character modulo lcm(q1, q2).
DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b);

// All phi(q) characters mod q, lexicographic in generator exponent vectors.
std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q);

// Primitive characters mod q in enumeration order.
std::vector<DirichletCharacter> primitive_characters(std::uint64_t q);

// Conductor by scanning divisors r of q ascending for the first r such that
// chi is 1 on every unit n = 1 (mod r).
std::uint64_t conductor(const DirichletCharacter& chi);

// The character mod q agreeing with psi on units; needs conductor(psi) | q.
DirichletCharacter induce(const DirichletCharacter& psi, std::uint64_t q);

// The unique primitive character inducing chi.
DirichletCharacter decompose(const DirichletCharacter& chi);

// Number of primitive characters mod r: sum_{d | r} mu(r/d) phi(d).
std::uint64_t count_primitive(std::uint64_t r);

// The primitive characters of conductor <= D, including the trivial one.
class CharacterFamily {
 public:
  explicit CharacterFamily(std::uint64_t D);

  std::uint64_t D() const { return D_; }
  const std::vector<DirichletCharacter>& members() const& { return members_; }
  std::vector<DirichletCharacter> members() && { return std::move(members_); }
  std::size_t size() const { return members_.size(); }
  bool contains(const DirichletCharacter& chi) const;

  // Members of modulus <= Q (members are primitive, so modulus = conductor).
  std::vector<DirichletCharacter> up_to(std::uint64_t Q) const;

 private:
  std::uint64_t D_;
  std::vector<DirichletCharacter> members_;  // ordered by modulus, then index
};

inline CharacterFamily family_A(std::uint64_t D) { return CharacterFamily(D); }

}  // namespace smoothbv
