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

#include "smoothbv/large_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "smoothbv/cache.hpp"
#include "smoothbv/cyclotomic.hpp"
#include "smoothbv/errors.hpp"
#include "smoothbv/parallel.hpp"

namespace smoothbv {

namespace {

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

std::vector<Complex> roots(std::uint64_t m) {
  std::vector<Complex> r(m);
  for (std::uint64_t k = 0; k < m; ++k) r[k] = root_of_unity(k, m);
  return r;
}

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::vector<Complex> random_complex(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Complex> v(n);
  for (auto& z : v) {
    const double re = unit_double(rng);
    z = Complex{re, unit_double(rng)};
  }
  return v;
}

void normalize(std::vector<Complex>& v) {
  const double n = std::sqrt(norm2(v));
  if (n > 0)
    for (auto& z : v) z /= n;
}

template <class Step, class Size>
NormEstimate power_iterate(Size dim, Step step, std::uint64_t seed, std::size_t min_iter,
                           std::size_t max_iter, double psi) {
  NormEstimate est;
  if (dim == 0 || psi == 0) return est;
  auto v = random_complex(dim, seed);
  normalize(v);
  double lambda = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    double next = 0.0;
    v = step(v, next);  // next = ||A v||^2 with ||v|| = 1
    normalize(v);
    est.iterations = it;
    const bool settled = std::abs(next - lambda) <= 1e-14 * next;
    lambda = next;
    if (it >= min_iter && settled) break;
  }
  est.ratio = lambda / psi;
  return est;
}

}  // namespace

std::uint64_t default_sieve_Q(std::uint64_t x, std::uint64_t y, WeightMode mode, double c) {
  if (x < 3 || y < 2) throw DomainError("default_sieve_Q: need x >= 3 and y >= 2");
  const double lx = std::log(static_cast<double>(x));
  double Q = 0;
  if (mode == WeightMode::kUnweighted)
    Q = std::min(std::pow(static_cast<double>(y), c), std::exp(c * lx / std::log(lx)));
  else
    Q = std::exp(c * lx);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(Q + 1e-9)));
}

LargeSieveMatrix::LargeSieveMatrix(const SieveTable& table, std::uint64_t x, std::uint64_t y,
                                   std::uint64_t Q, WeightMode mode, unsigned threads)
    : smooth_(table, x, y), threads_(threads) {
  if (Q == 0) throw DomainError("LargeSieveMatrix: Q = 0");
  rows_ = CharacterFamily(Q).members();
  for (std::size_t i = 0; i < rows_.size();) {
    Block b;
    b.q = rows_[i].modulus();
    b.scale = mode == WeightMode::kUnweighted ? 1.0 : std::pow(static_cast<double>(b.q), -0.25);
    b.first = i;
    while (i < rows_.size() && rows_[i].modulus() == b.q) {
      b.exps.push_back(rows_[i].exponent_table());
      b.orders.push_back(rows_[i].order());
      ++i;
    }
    b.last = i;
    blocks_.push_back(std::move(b));
  }
}

std::vector<Complex> LargeSieveMatrix::rows_from_columns(std::span<const Complex> a,
                                                         bool conjugate) const {
  if (a.size() != cols()) throw DomainError("LargeSieveMatrix: column vector size");
  const auto n = smooth();
  std::vector<Complex> out(rows());
  parallel_for(blocks_.size(), threads_, [&](std::size_t bi) {
    const Block& b = blocks_[bi];
    std::vector<Complex> B(b.q);
    for (std::size_t i = 0; i < n.size(); ++i) B[n[i] % b.q] += a[i];
    for (std::size_t c = 0; c < b.exps.size(); ++c) {
      const auto m = b.orders[c];
      const auto rt = roots(m);
      Complex s{};
      for (std::uint64_t r = 0; r < b.q; ++r) {
        const std::int32_t e = b.exps[c][r];
        if (e < 0) continue;
        s += rt[conjugate ? (m - e) % m : e] * B[r];
      }
      out[b.first + c] = b.scale * s;
    }
  });
  return out;
}

std::vector<Complex> LargeSieveMatrix::columns_from_rows(std::span<const Complex> v,
                                                         bool conjugate) const {
  if (v.size() != rows()) throw DomainError("LargeSieveMatrix: row vector size");
  std::vector<std::vector<Complex>> C(blocks_.size());
  parallel_for(blocks_.size(), threads_, [&](std::size_t bi) {
    const Block& b = blocks_[bi];
    C[bi].assign(b.q, Complex{});
    for (std::size_t c = 0; c < b.exps.size(); ++c) {
      const auto m = b.orders[c];
      const auto rt = roots(m);
      const Complex w = b.scale * v[b.first + c];
      for (std::uint64_t r = 0; r < b.q; ++r) {
        const std::int32_t e = b.exps[c][r];
        if (e >= 0) C[bi][r] += rt[conjugate ? (m - e) % m : e] * w;
      }
    }
  });
  const auto n = smooth();
  std::vector<Complex> out(n.size());
  parallel_for(n.size(), threads_, [&](std::size_t i) {
    Complex s{};
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) s += C[bi][n[i] % blocks_[bi].q];
    out[i] = s;
  });
  return out;
}

std::vector<Complex> LargeSieveMatrix::apply(std::span<const Complex> a) const {
  return rows_from_columns(a, false);
}
std::vector<Complex> LargeSieveMatrix::apply_conj(std::span<const Complex> a) const {
  return rows_from_columns(a, true);
}
std::vector<Complex> LargeSieveMatrix::apply_adjoint(std::span<const Complex> b) const {
  return columns_from_rows(b, true);
}
std::vector<Complex> LargeSieveMatrix::apply_transpose(std::span<const Complex> b) const {
  return columns_from_rows(b, false);
}

SieveRatio ls_primal(const LargeSieveMatrix& M, std::span<const Complex> a_smooth) {
  SieveRatio r;
  r.lhs = norm2(M.apply(a_smooth));
  r.rhs = static_cast<double>(M.psi()) * norm2(a_smooth);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

SieveRatio ls_primal(const SieveTable& table, std::uint64_t x, std::uint64_t y, std::uint64_t Q,
                     std::span<const Complex> a, WeightMode mode, unsigned threads) {
  if (a.size() != x + 1) throw DomainError("ls_primal: coefficient array must have size x + 1");
  for (std::uint64_t n = 1; n <= x; ++n)
    if (a[n] != Complex{} && !table.is_smooth(n, y))
      throw DomainError("ls_primal: coefficient at non-smooth n = " + std::to_string(n));
  LargeSieveMatrix M(table, x, y, Q, mode, threads);
  std::vector<Complex> as;
  as.reserve(M.cols());
  for (const auto n : M.smooth()) as.push_back(a[n]);
  return ls_primal(M, as);
}

SieveRatio ls_dual(const LargeSieveMatrix& M, std::span<const Complex> b) {
  SieveRatio r;
  r.lhs = norm2(M.apply_transpose(b));
  r.rhs = static_cast<double>(M.psi()) * norm2(b);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

SieveRatio ls_dual(const SieveTable& table, std::uint64_t x, std::uint64_t y, std::uint64_t Q,
                   std::span<const Complex> b, unsigned threads) {
  return ls_dual(LargeSieveMatrix(table, x, y, Q, WeightMode::kUnweighted, threads), b);
}

NormEstimate max_ratio_primal(const LargeSieveMatrix& M, std::uint64_t seed,
                              std::size_t min_iter, std::size_t max_iter) {
  return power_iterate(
      M.cols(),
      [&](const std::vector<Complex>& v, double& lambda) {
        const auto w = M.apply(v);
        lambda = norm2(w);
        return M.apply_adjoint(w);
      },
      seed, min_iter, max_iter, static_cast<double>(M.psi()));
}

NormEstimate max_ratio_dual(const LargeSieveMatrix& M, std::uint64_t seed,
                            std::size_t min_iter, std::size_t max_iter) {
  return power_iterate(
      M.rows(),
      [&](const std::vector<Complex>& v, double& lambda) {
        const auto w = M.apply_transpose(v);
        lambda = norm2(w);
        return M.apply_conj(w);
      },
      seed, min_iter, max_iter, static_cast<double>(M.psi()));
}

double random_sign_max_ratio(const LargeSieveMatrix& M, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = 0.0;
  std::vector<Complex> a(M.cols());
  for (std::size_t t = 0; t < count; ++t) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i % 64 == 0) bits = rng();
      a[i] = Complex{(bits >> (i % 64)) & 1 ? 1.0 : -1.0, 0.0};
    }
    best = std::max(best, ls_primal(M, a).ratio);
  }
  return best;
}

std::vector<EtaClass> classify_eta(const SieveTable& table, std::uint64_t x, std::uint64_t y,
                                   std::uint64_t Q, unsigned k_max, unsigned threads) {
  if (Q == 0) throw DomainError("classify_eta: Q = 0");
  if (Q > kMaxCharacterModulus / Q) throw SizingError("classify_eta: Q^2 beyond the character cap");
  const SmoothSet S(table, x, y);
  const auto psi = static_cast<std::int64_t>(S.size());
  const auto psi2 = static_cast<unsigned __int128>(psi) * static_cast<unsigned __int128>(psi);
  const double psi2d = static_cast<double>(psi) * static_cast<double>(psi);

  // 4^k |s|^2 > Psi^2, with near ties checked in Z[zeta].
  auto above = [&](const std::vector<std::int64_t>& c, double abs2, unsigned k) {
    const double lhs = std::ldexp(abs2, 2 * static_cast<int>(k));
    if (std::abs(lhs - psi2d) >= 1e-6 * psi2d) return lhs > psi2d;
    const unsigned __int128 pow4 = static_cast<unsigned __int128>(1) << (2 * k);
    if (psi2 % pow4 != 0) return lhs > psi2d;
    const std::uint64_t m = c.size();
    CyclotomicInteger s(m), sbar(m);
    for (std::uint64_t e = 0; e < m; ++e) {
      if (c[e] == 0) continue;
      s.add_root(e, m, c[e]);
      sbar.add_root((m - e) % m, m, c[e]);
    }
    if ((s * sbar).equals_integer(static_cast<std::int64_t>(psi2 / pow4))) return false;
    return lhs > psi2d;
  };

  const std::uint64_t qmax = Q * Q;
  std::vector<std::vector<std::pair<unsigned, EtaMember>>> per_q(qmax + 1);
  parallel_for(qmax + 1, threads, [&](std::size_t qi) {
    const std::uint64_t q = qi;
    if (q < 2) return;
    std::vector<std::int64_t> cnt(q);
    for (const auto n : S.members()) ++cnt[n % q];
    for (const auto& chi : enumerate_characters(q)) {
      if (chi.is_principal()) continue;
      const std::uint64_t m = chi.order();
      std::vector<std::int64_t> c(m);
      for (std::uint64_t r = 0; r < q; ++r) {
        const auto e = chi.exponent_at(r);
        if (e >= 0) c[static_cast<std::size_t>(e)] += cnt[r];
      }
      Complex s{};
      for (std::uint64_t e = 0; e < m; ++e)
        if (c[e]) s += static_cast<double>(c[e]) * root_of_unity(e, m);
      const double abs2 = std::norm(s);
      unsigned k = 1;
      while (k <= k_max && !above(c, abs2, k)) ++k;
      if (k <= k_max) per_q[qi].push_back({k, EtaMember{chi, std::sqrt(abs2)}});
    }
  });

  std::vector<EtaClass> out;
  for (unsigned k = 1; k <= k_max; ++k) out.push_back({k, std::ldexp(1.0, -static_cast<int>(k)), {}, {}});
  for (auto& bucket : per_q)
    for (auto& [k, m] : bucket) out[k - 1].xi_eta.push_back(std::move(m));
  for (auto& cls : out) {
    for (const auto& m : cls.xi_eta) cls.xi_star_eta.push_back(decompose(m.chi));
    std::sort(cls.xi_star_eta.begin(), cls.xi_star_eta.end());
    cls.xi_star_eta.erase(std::unique(cls.xi_star_eta.begin(), cls.xi_star_eta.end()),
                          cls.xi_star_eta.end());
  }
  return out;
}

double exceptional_T(std::uint64_t x, std::uint64_t y, double B) {
  if (x < 2 || y < 2) throw DomainError("exceptional_T: need x, y >= 2");
  const double lx = std::log(static_cast<double>(x));
  const double u = lx / std::log(static_cast<double>(y));
  const double ulu = u * std::log(u);
  return std::max(1.0, std::pow(ulu, 4)) * std::pow(lx, B);
}

DetectionReport detect_exceptional(const FunctionTable& ft, const SieveTable& table,
                                   std::uint64_t x, std::uint64_t y, std::uint64_t Q, double B,
                                   double eps, CharacterSumCache* cache, unsigned threads) {
  if (x > ft.x()) throw RangeError("detect_exceptional: x beyond the function table");
  if (Q == 0) throw DomainError("detect_exceptional: Q = 0");
  for (const auto n : ft.support())
    if (std::abs(ft[n]) > 1.0 + 1e-9) throw DomainError("detect_exceptional: f is not 1-bounded");

  DetectionReport rep;
  rep.T = exceptional_T(x, y, B);
  rep.grid = dyadic_partition(x, rep.T, eps);
  const auto& grid = rep.grid;
  const SmoothSet S(table, x, y);
  std::vector<double> thr(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    thr[j] = static_cast<double>(S.count_upto(grid[j])) / (2.0 * rep.T);

  std::map<std::uint64_t, std::vector<DirichletCharacter>> by_modulus;
  const CharacterFamily family(Q);
  for (const auto& psi : family.members()) by_modulus[psi.modulus()].push_back(psi);
  std::vector<std::pair<std::uint64_t, std::vector<DirichletCharacter>>> groups(
      by_modulus.begin(), by_modulus.end());
  const std::string fkey = cache ? function_fingerprint(ft.fn(), x) : std::string{};

  struct Outcome {
    std::vector<ExceptionalMember> found;
    std::vector<NearMiss> near;
  };
  std::vector<Outcome> outcomes(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t gi) {
    const std::uint64_t r = groups[gi].first;
    const auto& chars = groups[gi].second;
    std::vector<std::vector<Complex>> vals(chars.size(), std::vector<Complex>(grid.size()));

    bool cached = cache != nullptr;
    if (cache) {
      for (std::size_t c = 0; c < chars.size() && cached; ++c)
        for (std::size_t j = 0; j < grid.size() && cached; ++j) {
          const CacheKey key{fkey, grid[j], r, chars[c].index()};
          auto v = cache->lookup(key, [&] { return character_sum(ft, grid[j], chars[c]); });
          if (v)
            vals[c][j] = *v;
          else
            cached = false;
        }
    }
    if (!cached) {
      std::vector<std::vector<std::int32_t>> exps;
      std::vector<std::vector<Complex>> conj_roots;
      for (const auto& psi : chars) {
        exps.push_back(psi.exponent_table());
        auto rt = roots(psi.order());
        for (auto& z : rt) z = std::conj(z);
        conj_roots.push_back(std::move(rt));
      }
      std::vector<Complex> bucket(r);
      const auto support = ft.support();
      std::size_t i = 0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        for (; i < support.size() && support[i] <= grid[j]; ++i)
          bucket[support[i] % r] += ft[support[i]];
        for (std::size_t c = 0; c < chars.size(); ++c) {
          Complex s{};
          for (std::uint64_t res = 0; res < r; ++res)
            if (exps[c][res] >= 0) s += conj_roots[c][exps[c][res]] * bucket[res];
          vals[c][j] = s;
        }
      }
      if (cache)
        for (std::size_t c = 0; c < chars.size(); ++c)
          for (std::size_t j = 0; j < grid.size(); ++j)
            cache->store(CacheKey{fkey, grid[j], r, chars[c].index()}, vals[c][j]);
    }

    for (std::size_t c = 0; c < chars.size(); ++c) {
      double best = -1.0;
      std::size_t best_j = 0;
      bool hit = false;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double a = std::abs(vals[c][j]);
        if (a >= thr[j]) {
          outcomes[gi].found.push_back({chars[c], grid[j], a, thr[j]});
          hit = true;
          break;
        }
        if (a / thr[j] > best) {
          best = a / thr[j];
          best_j = j;
        }
      }
      if (!hit && best >= 0.5)
        outcomes[gi].near.push_back(
            {chars[c], grid[best_j], std::abs(vals[c][best_j]), thr[best_j]});
    }
  });
  for (auto& o : outcomes) {
    for (auto& m : o.found) rep.set.add(std::move(m));
    for (auto& n : o.near) rep.near_misses.push_back(std::move(n));
  }
  return rep;
}

ExceptionalCounts exceptional_counts(const ExceptionalSet& set, std::uint64_t x, double B) {
  ExceptionalCounts c;
  c.count = set.size();
  c.weighted = set.weighted_count();
  c.bound = std::pow(std::log(static_cast<double>(x)), 3.0 * B + 13.0);
  return c;
}

}  // namespace smoothbv
