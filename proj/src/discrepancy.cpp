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

#include "smoothbv/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smoothbv/errors.hpp"
#include "smoothbv/parallel.hpp"
#include "smoothbv/summation.hpp"

namespace smoothbv {

namespace {

void require_unit(std::int64_t a, std::uint64_t q, const char* what) {
  if (std::gcd(reduce_mod(a, q), q) != 1)
    throw DomainError(std::string(what) + ": argument not coprime to the modulus");
}

std::uint64_t residue_b(std::int64_t a1, std::int64_t a2, std::uint64_t q) {
  require_unit(a1, q, "a1");
  require_unit(a2, q, "a2");
  const auto inv = mod_inverse(a2, q);
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(reduce_mod(a1, q)) * inv % q);
}

void require_range(const FunctionTable& ft, std::uint64_t x) {
  if (x > ft.x()) throw RangeError("x beyond the tabulated range");
}

std::vector<char> unit_mask(std::uint64_t q) {
  std::vector<char> m(q);
  for (std::uint64_t r = 0; r < q; ++r) m[r] = std::gcd(r, q) == 1;
  return m;
}

// sum_{r unit} conj(psi(r)) B_r for psi of modulus dividing q = B.size().
Complex twisted_sum(const std::vector<Complex>& B, const std::vector<char>& units,
                    const DirichletCharacter& psi) {
  const auto tbl = psi.complex_table();
  const std::uint64_t r = psi.modulus();
  return pairwise_sum(B.size(), [&](std::size_t i) {
    return units[i] ? std::conj(tbl[i % r]) * B[i] : Complex{};
  });
}

// All l <= x whose prime factors lie in ps, ascending.
std::vector<std::uint64_t> supported_up_to(const std::vector<std::uint64_t>& ps,
                                           std::uint64_t x) {
  std::vector<std::uint64_t> out{1};
  for (const auto p : ps) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint64_t v = out[i]; v <= x / p;) {
        v *= p;
        out.push_back(v);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// sum_{b | m, b <= bound} mu(b)
std::int64_t mobius_partial(std::uint64_t m, std::uint64_t bound) {
  std::int64_t s = 0;
  for (const auto b : divisors(m)) {
    if (b > bound) break;
    s += mobius(b);
  }
  return s;
}

}  // namespace

FunctionTable::FunctionTable(const MultFn& f, const SieveTable& table, std::uint64_t x)
    : f_(f), x_(x), values_(x + 1) {
  if (x > table.x_max()) throw RangeError("FunctionTable: x beyond the sieve");
  if (x == 0) return;
  const auto y = f.smooth_bound();
  values_[1] = Complex{1.0, 0.0};
  for (std::uint64_t n = 2; n <= x; ++n) {
    const std::uint64_t p = table.lpf(n);
    if (y && p > *y) continue;
    std::uint64_t m = n;
    unsigned k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    if (values_[m] == Complex{}) continue;
    values_[n] = values_[m] * f.at_prime_power(p, k);
  }
  for (std::uint64_t n = 1; n <= x; ++n)
    if (values_[n] != Complex{}) support_.push_back(static_cast<std::uint32_t>(n));
}

FunctionTable FunctionTable::zero(std::uint64_t x) {
  return FunctionTable(MultFn::from_table("zero", {}, MultFn::Fallback::kZero), x);
}

std::vector<Complex> FunctionTable::residue_sums(std::uint64_t X, std::uint64_t q) const {
  if (q == 0) throw DomainError("residue_sums: q = 0");
  if (X > x_) throw RangeError("residue_sums: X beyond the table");
  const auto end = std::upper_bound(support_.begin(), support_.end(), X);
  std::vector<std::size_t> start(q + 1, 0);
  for (auto it = support_.begin(); it != end; ++it) ++start[*it % q + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<Complex> flat(static_cast<std::size_t>(end - support_.begin()));
  auto fill = start;
  for (auto it = support_.begin(); it != end; ++it) flat[fill[*it % q]++] = values_[*it];
  std::vector<Complex> out(q);
  for (std::uint64_t r = 0; r < q; ++r)
    out[r] = pairwise_sum(start[r], start[r + 1], [&](std::size_t i) { return flat[i]; });
  return out;
}

ExceptionalSet ExceptionalSet::of(const std::vector<DirichletCharacter>& chars) {
  ExceptionalSet s;
  for (const auto& c : chars) s.add(c);
  return s;
}

void ExceptionalSet::add(ExceptionalMember m) {
  if (!m.psi.is_primitive()) throw DomainError("ExceptionalSet: character is not primitive");
  if (contains(m.psi)) return;
  members_.push_back(std::move(m));
}

bool ExceptionalSet::contains(const DirichletCharacter& psi) const {
  return std::any_of(members_.begin(), members_.end(),
                     [&](const ExceptionalMember& m) { return m.psi == psi; });
}

std::vector<DirichletCharacter> ExceptionalSet::dividing(std::uint64_t q) const {
  std::vector<DirichletCharacter> out;
  for (const auto& m : members_)
    if (q % m.psi.modulus() == 0) out.push_back(m.psi);
  return out;
}

double ExceptionalSet::beta() const {
  double s = 0.0;
  for (const auto& m : members_) s += 1.0 / static_cast<double>(m.psi.modulus());
  return s;
}

double ExceptionalSet::weighted_count() const {
  double s = 0.0;
  for (const auto& m : members_) s += 1.0 / std::sqrt(static_cast<double>(m.psi.modulus()));
  return s;
}

BetaStats beta_stats(const ExceptionalSet& xi) { return {xi.beta(), xi.weighted_count()}; }

Complex character_sum(const FunctionTable& ft, std::uint64_t X, const DirichletCharacter& chi) {
  require_range(ft, X);
  const auto B = ft.residue_sums(X, chi.modulus());
  const auto tbl = chi.complex_table();
  return pairwise_sum(B.size(), [&](std::size_t r) { return std::conj(tbl[r]) * B[r]; });
}

Complex character_sum(const MultFn& f, std::uint64_t X, const DirichletCharacter& chi,
                      const SieveTable& table) {
  return character_sum(FunctionTable(f, table, X), X, chi);
}

Complex delta(const FunctionTable& ft, std::uint64_t x, std::uint64_t q, std::int64_t a) {
  return discrepancy_record(ft, x, q, a, 1, ExceptionalSet{}).delta;
}

DiscrepancyRecord discrepancy_record(const FunctionTable& ft, std::uint64_t x, std::uint64_t q,
                                     std::int64_t a1, std::int64_t a2,
                                     const ExceptionalSet& xi) {
  if (q == 0) throw DomainError("modulus q = 0");
  require_range(ft, x);
  DiscrepancyRecord rec;
  rec.q = q;
  rec.a1 = a1;
  rec.a2 = a2;
  rec.b = residue_b(a1, a2, q);

  const auto B = ft.residue_sums(x, q);
  const auto units = unit_mask(q);
  const double phi = static_cast<double>(euler_phi(q));
  rec.progression_sum = B[rec.b];
  rec.coprime_main_term =
      pairwise_sum(B.size(), [&](std::size_t r) { return units[r] ? B[r] : Complex{}; }) / phi;
  rec.delta = rec.progression_sum - rec.coprime_main_term;

  Complex main{};
  for (const auto& psi : xi.dividing(q)) main += psi(rec.b) * twisted_sum(B, units, psi);
  rec.xi_main_term = main / phi;
  rec.delta_xi = rec.progression_sum - *rec.xi_main_term;
  return rec;
}

Complex delta_xi(const FunctionTable& ft, std::uint64_t x, std::uint64_t q, std::int64_t a1,
                 std::int64_t a2, const ExceptionalSet& xi) {
  return *discrepancy_record(ft, x, q, a1, a2, xi).delta_xi;
}

std::vector<Rational> u_kernel_moebius_table(std::uint64_t q, std::uint64_t D) {
  if (q == 0 || D == 0) throw DomainError("u_kernel: q and D must be positive");
  // w_d = phi(d) sum_{b <= D/d, b | q/d} mu(b) for d | q, d <= D
  std::vector<std::pair<std::uint64_t, std::int64_t>> w;
  for (const auto d : divisors(q)) {
    if (d > D) break;
    const std::int64_t mu_sum = mobius_partial(q / d, D / d);
    if (mu_sum != 0) w.emplace_back(d, static_cast<std::int64_t>(euler_phi(d)) * mu_sum);
  }
  const auto phi = static_cast<std::int64_t>(euler_phi(q));
  std::vector<Rational> out(q);
  for (std::uint64_t n = 0; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    std::int64_t s = 0;
    for (const auto& [d, wd] : w)
      if ((n + d - 1) % d == 0) s += wd;
    out[n] = Rational(n == 1 % q ? 1 : 0) - Rational(s, phi);
  }
  return out;
}

Rational u_kernel_moebius(std::int64_t n, std::uint64_t q, std::uint64_t D) {
  if (q == 0 || D == 0) throw DomainError("u_kernel: q and D must be positive");
  return u_kernel_moebius_table(q, D)[reduce_mod(n, q)];
}

std::vector<Complex> u_kernel_chardef_table(std::uint64_t q, std::uint64_t D,
                                            const CharacterFamily& family) {
  if (q == 0 || D == 0) throw DomainError("u_kernel: q and D must be positive");
  if (family.D() < std::min(D, q))
    throw DomainError("u_kernel_chardef: family does not reach conductor D");
  std::vector<Complex> acc(q);
  for (const auto& psi : family.members()) {
    const std::uint64_t r = psi.modulus();
    if (r > D || q % r != 0) continue;
    const auto tbl = induce(psi, q).complex_table();
    for (std::uint64_t n = 0; n < q; ++n) acc[n] += tbl[n];
  }
  const double phi = static_cast<double>(euler_phi(q));
  std::vector<Complex> out(q);
  for (std::uint64_t n = 0; n < q; ++n)
    out[n] = Complex{n == 1 % q ? 1.0 : 0.0, 0.0} - acc[n] / phi;
  return out;
}

Complex u_kernel_chardef(std::int64_t n, std::uint64_t q, std::uint64_t D,
                         const CharacterFamily& family) {
  return u_kernel_chardef_table(q, D, family)[reduce_mod(n, q)];
}

Complex delta_A(const FunctionTable& ft, std::uint64_t x, std::uint64_t q, std::int64_t a1,
                std::int64_t a2, std::uint64_t D) {
  if (q == 0) throw DomainError("modulus q = 0");
  require_range(ft, x);
  const std::uint64_t b = residue_b(a1, a2, q);
  const std::uint64_t b_inv = mod_inverse(static_cast<std::int64_t>(b), q);
  const auto u = u_kernel_moebius_table(q, D);
  const auto B = ft.residue_sums(x, q);
  return pairwise_sum(B.size(), [&](std::size_t r) {
    const auto& k = u[static_cast<unsigned __int128>(r) * b_inv % q];
    return B[r] * (static_cast<double>(k.numerator()) / static_cast<double>(k.denominator()));
  });
}

BvAverage bv_average(const FunctionTable& ft, std::uint64_t x, std::uint64_t Q,
                     std::int64_t a1, std::int64_t a2, const ExceptionalSet& xi,
                     unsigned threads) {
  require_range(ft, x);
  if (Q > x) throw DomainError("bv_average: Q > x");
  std::vector<std::uint64_t> moduli;
  for (std::uint64_t q = 1; q <= Q; ++q)
    if (std::gcd(reduce_mod(a1, q), q) == 1 && std::gcd(reduce_mod(a2, q), q) == 1)
      moduli.push_back(q);
  BvAverage out;
  out.records.resize(moduli.size());
  parallel_for(moduli.size(), threads, [&](std::size_t i) {
    out.records[i] = discrepancy_record(ft, x, moduli[i], a1, a2, xi);
  });
  for (const auto& r : out.records) out.total += std::abs(*r.delta_xi);
  return out;
}

IdentityCheck verify_transfer_identity(const FunctionTable& ft, std::uint64_t x,
                                       std::uint64_t q, std::int64_t a1, std::int64_t a2,
                                       const ExceptionalSet& xi, std::uint64_t D) {
  require_range(ft, x);
  if (q == 0 || D == 0) throw DomainError("transfer identity: q and D must be positive");
  for (const auto& m : xi.members())
    if (m.psi.modulus() > D) throw DomainError("transfer identity: Xi not inside A(D)");
  const std::uint64_t b = residue_b(a1, a2, q);

  IdentityCheck out;
  out.lhs = delta_xi(ft, x, q, a1, a2, xi) - delta_A(ft, x, q, a1, a2, D);

  std::vector<std::uint64_t> ps;
  for (const auto& pp : factor_trial(q)) ps.push_back(pp.p);
  const auto ells = supported_up_to(ps, x);
  const MultFn g = dirichlet_inverse(ft.fn(), x);

  struct Level {
    std::uint64_t d;
    double weight;                        // phi(d) * sum mu
    std::vector<Complex> cum;             // cum[X d + r]
    std::vector<char> units;
    std::vector<DirichletCharacter> xi_d;
    std::vector<std::vector<Complex>> tables;
  };
  std::vector<Level> levels;
  for (const auto d : divisors(q)) {
    if (d > D) break;
    const std::int64_t mu_sum = mobius_partial(q / d, D / d);
    if (mu_sum == 0) continue;
    Level L;
    L.d = d;
    L.weight = static_cast<double>(euler_phi(d)) * static_cast<double>(mu_sum);
    L.cum.assign((x + 1) * d, Complex{});
    for (std::uint64_t X = 1; X <= x; ++X) {
      std::copy_n(L.cum.begin() + static_cast<std::ptrdiff_t>((X - 1) * d), d,
                  L.cum.begin() + static_cast<std::ptrdiff_t>(X * d));
      L.cum[X * d + X % d] += ft[X];
    }
    L.units = unit_mask(d);
    L.xi_d = xi.dividing(d);
    for (const auto& psi : L.xi_d) L.tables.push_back(psi.complex_table());
    levels.push_back(std::move(L));
  }

  Complex total{};
  for (const auto ell : ells) {
    Complex g_ell{1.0, 0.0};
    for (const auto& pp : factor_trial(ell)) g_ell *= g.at_prime_power(pp.p, pp.e);
    if (g_ell == Complex{}) continue;
    const std::uint64_t X = x / ell;
    for (const auto& L : levels) {
      if (std::gcd(L.d, ell) != 1) continue;
      const std::uint64_t c = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(b) * mod_inverse(static_cast<std::int64_t>(ell % L.d), L.d) %
          L.d);
      const Complex* row = L.cum.data() + X * L.d;
      Complex main{};
      for (std::size_t i = 0; i < L.xi_d.size(); ++i) {
        const auto& tbl = L.tables[i];
        const std::uint64_t r = L.xi_d[i].modulus();
        Complex s{};
        for (std::uint64_t res = 0; res < L.d; ++res)
          if (L.units[res]) s += std::conj(tbl[res % r]) * row[res];
        main += tbl[c % r] * s;
      }
      const Complex delta_d = row[c] - main / static_cast<double>(euler_phi(L.d));
      total += g_ell * L.weight * delta_d;
    }
  }
  out.rhs = total / static_cast<double>(euler_phi(q));
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

IdentityCheck verify_convolution_identity(const FunctionTable& ft, std::uint64_t x,
                                          const DirichletCharacter& chi) {
  require_range(ft, x);
  const DirichletCharacter psi = decompose(chi);
  const std::uint64_t r = psi.modulus();
  const MultFn& f = ft.fn();

  std::vector<std::uint64_t> ps;
  for (const auto& pp : factor_trial(chi.modulus()))
    if (r % pp.p != 0) ps.push_back(pp.p);

  // h(p^k) = -sum_{j=1..k} f(p^j) conj(psi(p^j)) h(p^{k-j})
  std::vector<std::vector<Complex>> h(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::uint64_t p = ps[i];
    std::vector<Complex> a{Complex{1.0, 0.0}};
    h[i] = {Complex{1.0, 0.0}};
    std::uint64_t pk = 1;
    for (unsigned k = 1; pk <= x / p; ++k) {
      pk *= p;
      a.push_back(f.at_prime_power(p, k) * std::conj(psi(pk % r)));
      Complex hk{};
      for (unsigned j = 1; j <= k; ++j) hk -= a[j] * h[i][k - j];
      h[i].push_back(hk);
    }
  }

  IdentityCheck out;
  out.lhs = character_sum(ft, x, chi);
  for (const auto m : supported_up_to(ps, x)) {
    Complex hm{1.0, 0.0};
    std::uint64_t rest = m;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      unsigned k = 0;
      while (rest % ps[i] == 0) {
        rest /= ps[i];
        ++k;
      }
      hm *= h[i][k];
    }
    if (hm == Complex{}) continue;
    out.rhs += hm * character_sum(ft, x / m, psi);
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace smoothbv
