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

#include "smoothbv/characters.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "smoothbv/errors.hpp"

namespace smoothbv {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// x = r1 (mod m1), x = r2 (mod m2), gcd(m1, m2) = 1.
std::uint64_t crt_pair(std::uint64_t r1, std::uint64_t m1, std::uint64_t r2,
                       std::uint64_t m2) {
  if (m2 == 1) return r1 % m1;
  const auto inv = mod_inverse(static_cast<std::int64_t>(m1 % m2), m2);
  const unsigned __int128 t =
      static_cast<unsigned __int128>((r2 + m2 - r1 % m2) % m2) * inv % m2;
  return static_cast<std::uint64_t>(r1 + t * m1);
}

std::vector<std::int32_t> walk_logs(std::uint64_t g, std::uint64_t order,
                                    std::uint64_t modulus) {
  std::vector<std::int32_t> log(modulus, -1);
  std::uint64_t v = 1;
  for (std::uint64_t t = 0; t < order; ++t) {
    log[v] = static_cast<std::int32_t>(t);
    v = v * g % modulus;
  }
  return log;
}

}  // namespace

DirichletGroup::DirichletGroup(std::uint64_t q)
    : q_(q), phi_(euler_phi(q)), exponent_(1), factors_(factor_trial(q)) {
  if (q == 0) throw DomainError("DirichletGroup: modulus 0");
  for (const auto& [p, e] : factors_) {
    const std::uint64_t pe = ipow(p, e);
    const std::uint64_t rest = q / pe;
    auto add = [&](std::uint64_t residue, std::uint64_t order,
                   std::vector<std::int32_t> log) {
      gens_.push_back({pe, crt_pair(residue, pe, 1, rest), order, std::move(log)});
      exponent_ = std::lcm(exponent_, order);
    };
    if (p == 2) {
      if (e == 1) continue;
      std::vector<std::int32_t> sign(pe, -1);
      for (std::uint64_t n = 1; n < pe; n += 2) sign[n] = (n % 4 == 3) ? 1 : 0;
      add(pe - 1, 2, std::move(sign));
      if (e >= 3) {
        const std::uint64_t ord = pe / 4;
        auto log = walk_logs(5, ord, pe);
        for (std::uint64_t n = 3; n < pe; n += 4) log[n] = log[pe - n];
        add(5, ord, std::move(log));
      }
    } else {
      std::uint64_t g = primitive_root(p);
      if (e >= 2 && mod_pow(g, p - 1, p * p) == 1) g += p;
      const std::uint64_t ord = pe / p * (p - 1);
      add(g, ord, walk_logs(g, ord, pe));
    }
  }
}

std::shared_ptr<const DirichletGroup> DirichletGroup::get(std::uint64_t q) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::weak_ptr<const DirichletGroup>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(q); it != cache.end())
    if (auto sp = it->second.lock()) return sp;
  if (cache.size() > 4096)
    std::erase_if(cache, [](const auto& kv) { return kv.second.expired(); });
  auto sp = std::make_shared<const DirichletGroup>(q);
  cache[q] = sp;
  return sp;
}

bool DirichletGroup::is_unit(std::uint64_t n) const { return std::gcd(n, q_) == 1; }

std::int64_t DirichletGroup::value_exponent(std::span<const std::uint64_t> j,
                                            std::uint64_t n) const {
  // Modulus 2 contributes no generator but still kills even n.
  if (q_ % 2 == 0 && n % 2 == 0) return -1;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    const std::int32_t l = g.log[n % g.component_modulus];
    if (l < 0) return -1;
    if (j[i] == 0) continue;
    const auto step = static_cast<unsigned __int128>(j[i]) * static_cast<std::uint64_t>(l) %
                      g.order * (exponent_ / g.order);
    acc = static_cast<std::uint64_t>((acc + step) % exponent_);
  }
  return static_cast<std::int64_t>(acc);
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const DirichletGroup> group,
                                       std::vector<std::uint64_t> exponents)
    : group_(std::move(group)), exps_(std::move(exponents)) {
  const auto gens = group_->generators();
  if (exps_.size() != gens.size())
    throw DomainError("DirichletCharacter: exponent vector has wrong length");
  order_ = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    exps_[i] %= gens[i].order;
    order_ = std::lcm(order_, gens[i].order / std::gcd(gens[i].order, exps_[i]));
  }
  // Conductor from the local order at each prime power.
  conductor_ = 1;
  std::size_t gi = 0;
  for (const auto& [p, e] : group_->factorization()) {
    if (p == 2) {
      if (e == 1) continue;
      const bool sign = exps_[gi] != 0;
      ++gi;
      std::uint64_t local = sign ? 4 : 1;
      if (e >= 3) {
        const std::uint64_t o = gens[gi].order / std::gcd(gens[gi].order, exps_[gi]);
        if (o > 1) local = 4 * o;  // order 2^t -> conductor 2^{t+2}
        ++gi;
      }
      conductor_ *= local;
    } else {
      const std::uint64_t o = gens[gi].order / std::gcd(gens[gi].order, exps_[gi]);
      ++gi;
      if (o == 1) continue;
      std::uint64_t pc = p, span = p - 1;
      while (span % o != 0) {
        span *= p;
        pc *= p;
      }
      conductor_ *= pc;
    }
  }
}

DirichletCharacter DirichletCharacter::trivial() { return principal(1); }

DirichletCharacter DirichletCharacter::principal(std::uint64_t q) {
  auto g = DirichletGroup::get(q);
  std::vector<std::uint64_t> zeros(g->generators().size(), 0);
  return DirichletCharacter(std::move(g), std::move(zeros));
}

std::uint64_t DirichletCharacter::index() const {
  std::uint64_t idx = 0;
  const auto gens = group_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) idx = idx * gens[i].order + exps_[i];
  return idx;
}

std::int64_t DirichletCharacter::exponent_at(std::uint64_t n) const {
  const std::int64_t e = group_->value_exponent(exps_, n % modulus());
  if (e < 0) return -1;
  return e / static_cast<std::int64_t>(group_->exponent() / order_);
}

std::optional<RootOfUnity> DirichletCharacter::value(std::uint64_t n) const {
  const std::int64_t k = exponent_at(n);
  if (k < 0) return std::nullopt;
  return RootOfUnity{static_cast<std::uint64_t>(k), order_};
}

Complex DirichletCharacter::operator()(std::uint64_t n) const {
  const std::int64_t k = exponent_at(n);
  return k < 0 ? Complex{} : root_of_unity(static_cast<std::uint64_t>(k), order_);
}

std::vector<std::int32_t> DirichletCharacter::exponent_table() const {
  std::vector<std::int32_t> t(modulus());
  for (std::uint64_t n = 0; n < modulus(); ++n)
    t[n] = static_cast<std::int32_t>(exponent_at(n));
  return t;
}

std::vector<Complex> DirichletCharacter::complex_table() const {
  std::vector<Complex> roots(order_);
  for (std::uint64_t k = 0; k < order_; ++k) roots[k] = root_of_unity(k, order_);
  std::vector<Complex> t(modulus());
  for (std::uint64_t n = 0; n < modulus(); ++n) {
    const std::int64_t k = exponent_at(n);
    t[n] = k < 0 ? Complex{} : roots[static_cast<std::size_t>(k)];
  }
  return t;
}

DirichletCharacter DirichletCharacter::conj() const {
  auto e = exps_;
  const auto gens = group_->generators();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (gens[i].order - e[i]) % gens[i].order;
  return DirichletCharacter(group_, std::move(e));
}

bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
  return a.modulus() == b.modulus() && a.exps_ == b.exps_;
}

bool operator<(const DirichletCharacter& a, const DirichletCharacter& b) {
  if (a.modulus() != b.modulus()) return a.modulus() < b.modulus();
  return a.exps_ < b.exps_;
}

namespace {

// Builds the character mod q whose value at each generator lift is given by
// `value_at`, which must return a root of unity of order dividing ord_i.
template <class Fn>
DirichletCharacter from_generator_values(std::uint64_t q, Fn&& value_at) {
  auto group = DirichletGroup::get(q);
  std::vector<std::uint64_t> j;
  for (const auto& g : group->generators()) {
    const RootOfUnity v = value_at(g.lift);
    j.push_back(v.k * g.order / v.m % g.order);
  }
  return DirichletCharacter(std::move(group), std::move(j));
}

RootOfUnity require_value(const DirichletCharacter& chi, std::uint64_t n) {
  auto v = chi.value(n);
  if (!v) throw DomainError("character evaluated off units while building from generators");
  return *v;
}

}  // namespace

DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
  const std::uint64_t q = std::lcm(a.modulus(), b.modulus());
  return from_generator_values(q, [&](std::uint64_t g) {
    const RootOfUnity va = require_value(a, g), vb = require_value(b, g);
    const std::uint64_t m = std::lcm(va.m, vb.m);
    return RootOfUnity{(va.k * (m / va.m) + vb.k * (m / vb.m)) % m, m};
  });
}

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q) {
  if (q == 0) throw DomainError("enumerate_characters: q = 0");
  if (q > kMaxCharacterModulus)
    throw SizingError("enumerate_characters: q = " + std::to_string(q) +
                      " exceeds cap " + std::to_string(kMaxCharacterModulus));
  auto group = DirichletGroup::get(q);
  const auto gens = group->generators();
  std::vector<DirichletCharacter> out;
  out.reserve(group->phi());
  std::vector<std::uint64_t> j(gens.size(), 0);
  for (std::uint64_t idx = 0; idx < group->phi(); ++idx) {
    out.emplace_back(group, j);
    for (std::size_t i = gens.size(); i-- > 0;) {  // odometer, last digit fastest
      if (++j[i] < gens[i].order) break;
      j[i] = 0;
    }
  }
  return out;
}

std::vector<DirichletCharacter> primitive_characters(std::uint64_t q) {
  auto all = enumerate_characters(q);
  std::erase_if(all, [](const DirichletCharacter& c) { return !c.is_primitive(); });
  return all;
}

std::uint64_t conductor(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  if (q == 1) return 1;
  for (const std::uint64_t r : divisors(q)) {
    bool induced = true;
    for (std::uint64_t n = 1; n < q; n += r) {
      if (std::gcd(n, q) == 1 && chi.exponent_at(n) != 0) {
        induced = false;
        break;
      }
    }
    if (induced) return r;
  }
  return q;
}

DirichletCharacter decompose(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  const std::uint64_t r = chi.conductor();
  if (r == q) return chi;
  return from_generator_values(r, [&](std::uint64_t h) {
    for (std::uint64_t n = h; n < q + h; n += r)
      if (std::gcd(n, q) == 1) return require_value(chi, n);
    throw DomainError("decompose: no unit lift found");
  });
}

DirichletCharacter induce(const DirichletCharacter& psi, std::uint64_t q) {
  if (q == 0 || q % psi.conductor() != 0)
    throw DomainError("induce: conductor " + std::to_string(psi.conductor()) +
                      " does not divide " + std::to_string(q));
  const DirichletCharacter prim = decompose(psi);
  return from_generator_values(q, [&](std::uint64_t g) { return require_value(prim, g); });
}

std::uint64_t count_primitive(std::uint64_t r) {
  std::int64_t total = 0;
  for (const std::uint64_t d : divisors(r))
    total += mobius(r / d) * static_cast<std::int64_t>(euler_phi(d));
  return static_cast<std::uint64_t>(total);
}

CharacterFamily::CharacterFamily(std::uint64_t D) : D_(D) {
  if (D == 0) throw DomainError("family_A: D must be >= 1");
  for (std::uint64_t r = 1; r <= D; ++r)
    for (auto& chi : primitive_characters(r)) members_.push_back(std::move(chi));
}

bool CharacterFamily::contains(const DirichletCharacter& chi) const {
  return chi.is_primitive() && chi.modulus() <= D_;
}

std::vector<DirichletCharacter> CharacterFamily::up_to(std::uint64_t Q) const {
  std::vector<DirichletCharacter> out;
  for (const auto& c : members_)
    if (c.modulus() <= Q) out.push_back(c);
  return out;
}

}  // namespace smoothbv
