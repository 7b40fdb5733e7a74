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

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "smoothbv/characters.hpp"
#include "smoothbv/cyclotomic.hpp"
#include "smoothbv/errors.hpp"
#include "support.hpp"

using namespace smoothbv;

namespace {

std::vector<std::int64_t> signed_table(const DirichletCharacter& chi) {
  // Real characters only: +1, -1 or 0 per residue.
  std::vector<std::int64_t> out;
  for (std::uint64_t n = 0; n < chi.modulus(); ++n) {
    const auto v = chi.value(n);
    if (!v) {
      out.push_back(0);
      continue;
    }
    REQUIRE((v->k * 2) % v->m == 0);
    out.push_back(v->k == 0 ? 1 : -1);
  }
  return out;
}

DirichletCharacter nontrivial(std::uint64_t q) {
  for (const auto& c : enumerate_characters(q))
    if (!c.is_principal()) return c;
  FAIL("no nontrivial character");
  return DirichletCharacter::trivial();
}

}  // namespace

TEST_CASE("modulus one and small moduli") {
  const auto one = enumerate_characters(1);
  REQUIRE(one.size() == 1);
  for (std::uint64_t n = 0; n < 20; ++n) CHECK(one[0](n) == Complex{1.0, 0.0});
  CHECK(one[0].conductor() == 1);
  CHECK(conductor(one[0]) == 1);
  CHECK_THROWS_AS(enumerate_characters(0), DomainError);
  CHECK_THROWS_AS(enumerate_characters(kMaxCharacterModulus + 1), SizingError);

  const auto five = enumerate_characters(5);
  REQUIRE(five.size() == 4);
  std::set<std::uint64_t> at2;
  for (const auto& c : five) {
    const auto v = *c.value(2);
    at2.insert(v.k * 4 / v.m);
    CHECK((v.k * 4) % v.m == 0);
  }
  CHECK(at2 == std::set<std::uint64_t>{0, 1, 2, 3});
}

TEST_CASE("mod 8 matches brute-force homomorphisms") {
  const std::uint64_t units[] = {1, 3, 5, 7};
  std::set<std::vector<std::int64_t>> brute;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<std::int64_t> v(8, 0);
    for (int i = 0; i < 4; ++i) v[units[i]] = (mask >> i) & 1 ? -1 : 1;
    bool hom = true;
    for (const auto a : units)
      for (const auto b : units) hom = hom && v[a * b % 8] == v[a] * v[b];
    if (hom) brute.insert(v);
  }
  std::set<std::vector<std::int64_t>> ours;
  for (const auto& c : enumerate_characters(8)) ours.insert(signed_table(c));
  CHECK(brute.size() == 4);
  CHECK(ours == brute);
}

TEST_CASE("type invariants for q <= 200") {
  for (std::uint64_t q = 1; q <= 200; ++q) {
    const auto chars = enumerate_characters(q);
    REQUIRE(chars.size() == euler_phi(q));
    std::set<std::vector<std::int32_t>> tables;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const auto& chi = chars[i];
      REQUIRE(chi.index() == i);
      const auto t = chi.exponent_table();
      tables.insert(t);
      CHECK(t[1 % q] == 0);
      for (std::uint64_t n = 0; n < q; ++n) REQUIRE((t[n] < 0) == (std::gcd(n, q) != 1));
      CHECK(q % chi.conductor() == 0);
      CHECK(chi.is_primitive() == (chi.conductor() == q));
      // complete multiplicativity on a sample of unit pairs
      for (std::uint64_t a = 1; a < q; a += 1 + q / 7)
        for (std::uint64_t b = 1; b < q; b += 1 + q / 5) {
          if (t[a] < 0 || t[b] < 0) continue;
          REQUIRE(t[a * b % q] == static_cast<std::int32_t>((t[a] + t[b]) % chi.order()));
        }
      // orthogonality over n, exactly
      CyclotomicInteger s(chi.order());
      for (std::uint64_t n = 0; n < q; ++n)
        if (t[n] >= 0) s.add_root(t[n], chi.order());
      REQUIRE(s.equals_integer(chi.is_principal() ? static_cast<std::int64_t>(euler_phi(q)) : 0));
    }
    REQUIRE(tables.size() == chars.size());
  }
}

TEST_CASE("orthogonality over characters, exact") {
  for (std::uint64_t q = 1; q <= 200; ++q) {
    const auto chars = enumerate_characters(q);
    const auto lambda = DirichletGroup::get(q)->exponent();
    for (std::uint64_t n = 0; n < q; ++n) {
      if (std::gcd(n, q) != 1) continue;
      CyclotomicInteger s(lambda);
      for (const auto& c : chars) s.add_root(c.exponent_at(n), c.order());
      REQUIRE(s.equals_integer(n == 1 % q ? static_cast<std::int64_t>(euler_phi(q)) : 0));
    }
  }
}

TEST_CASE("conductor examples") {
  CHECK(conductor(DirichletCharacter::principal(12)) == 1);
  CHECK(DirichletCharacter::principal(12).conductor() == 1);
  CHECK(conductor(nontrivial(4)) == 4);
  const auto chi6 = nontrivial(6);
  CHECK(conductor(chi6) == 3);
  const auto chi3 = nontrivial(3);
  for (std::uint64_t n = 1; n < 6; ++n)
    if (std::gcd(n, std::uint64_t{6}) == 1) CHECK(chi6(n) == chi3(n));
}

TEST_CASE("structural conductor agrees with the divisor scan") {
  for (std::uint64_t q = 1; q <= 500; ++q)
    for (const auto& c : enumerate_characters(q)) REQUIRE(c.conductor() == conductor(c));
}

TEST_CASE("primitive counts") {
  for (std::uint64_t q = 1; q <= 500; ++q) {
    std::uint64_t total = 0;
    for (const auto s : divisors(q)) total += primitive_characters(s).size();
    REQUIRE(total == euler_phi(q));
    REQUIRE(primitive_characters(q).size() == count_primitive(q));
  }
}

TEST_CASE("conjugation closure") {
  for (std::uint64_t q = 1; q <= 120; ++q) {
    const auto chars = enumerate_characters(q);
    for (const auto& c : chars) {
      const auto cc = c.conj();
      REQUIRE(std::find(chars.begin(), chars.end(), cc) != chars.end());
      REQUIRE(conductor(cc) == conductor(c));
      for (std::uint64_t n = 0; n < q; ++n) REQUIRE(std::abs(cc(n) - std::conj(c(n))) < 1e-12);
    }
  }
}

TEST_CASE("induce and decompose") {
  CHECK(induce(DirichletCharacter::trivial(), 15) == DirichletCharacter::principal(15));
  CHECK(decompose(DirichletCharacter::principal(15)) == DirichletCharacter::trivial());

  const auto chi = induce(nontrivial(3), 6);
  const double expect[] = {1, 0, 0, 0, -1, 0};
  for (std::uint64_t n = 1; n <= 6; ++n) CHECK(std::abs(chi(n) - Complex{expect[n - 1], 0}) < 1e-15);
  CHECK(decompose(nontrivial(6)) == nontrivial(3));
  CHECK_THROWS_AS(induce(nontrivial(3), 10), DomainError);

  for (std::uint64_t q = 1; q <= 100; ++q)
    for (const auto r : divisors(q))
      for (const auto& psi : primitive_characters(r)) {
        const auto up = induce(psi, q);
        REQUIRE(up.modulus() == q);
        REQUIRE(up.conductor() == r);
        REQUIRE(decompose(up) == psi);
        for (std::uint64_t n = 0; n < q; ++n)
          REQUIRE(up.exponent_at(n) ==
                  (std::gcd(n, q) == 1 ? psi.exponent_at(n) * static_cast<std::int64_t>(up.order() / psi.order()) : -1));
        if (psi.modulus() == q) REQUIRE(decompose(psi) == psi);
      }
}

TEST_CASE("family A") {
  CHECK(family_A(1).size() == 1);
  CHECK(family_A(1).members()[0] == DirichletCharacter::trivial());
  CHECK(family_A(3).size() == 2);
  CHECK(family_A(5).size() == 6);
  for (const std::uint64_t D : {7, 20, 60}) {
    const auto fam = family_A(D);
    std::uint64_t expect = 0;
    for (std::uint64_t r = 1; r <= D; ++r) {
      std::uint64_t brute = 0;
      for (const auto& c : enumerate_characters(r)) brute += conductor(c) == r;
      expect += brute;
    }
    CHECK(fam.size() == expect);
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& m : fam.members()) {
      CHECK(m.is_primitive());
      CHECK(seen.insert({m.modulus(), m.index()}).second);
      CHECK(fam.contains(m.conj()));
    }
    CHECK_FALSE(fam.contains(DirichletCharacter::principal(2)));
  }
}

TEST_CASE("at most one primitive chi2 per (chi1, psi)") {
  const auto fam = family_A(60);
  const auto& m = fam.members();
  std::size_t worst = 0;
  for (const auto& a : m) {
    std::map<DirichletCharacter, std::size_t> count;
    for (const auto& b : m) worst = std::max(worst, ++count[decompose(a * b.conj())]);
  }
  CHECK(worst == 1);
}

TEST_CASE("product character") {
  testing::Gen g(17);
  for (int i = 0; i < 200; ++i) {
    const auto qa = g.range(1, 40), qb = g.range(1, 40);
    const auto ca = enumerate_characters(qa), cb = enumerate_characters(qb);
    const auto& a = g.pick(ca);
    const auto& b = g.pick(cb);
    const auto p = a * b;
    REQUIRE(p.modulus() == std::lcm(qa, qb));
    for (std::uint64_t n = 0; n < p.modulus(); ++n)
      REQUIRE(std::abs(p(n) - a(n) * b(n)) < 1e-12);
  }
}
