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

#include "smoothbv/multfn.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "smoothbv/errors.hpp"

namespace smoothbv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Complex cpow(Complex base, unsigned k) {
  Complex r{1.0, 0.0};
  for (unsigned i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

MultFn::MultFn(std::string label, Oracle oracle, std::optional<std::uint64_t> smooth_bound)
    : label_(std::move(label)),
      oracle_(std::make_shared<const Oracle>(std::move(oracle))),
      smooth_bound_(smooth_bound) {
  if (smooth_bound_ && *smooth_bound_ < 2)
    throw DomainError("MultFn: smoothness bound must be >= 2");
}

Complex MultFn::at_prime_power(std::uint64_t p, unsigned k) const {
  if (k == 0) return {1.0, 0.0};
  if (smooth_bound_ && p > *smooth_bound_) return {};
  if (auto v = (*oracle_)(p, k)) return *v;
  throw EvaluationError("MultFn '" + label_ + "': no value at (p, k) = (" +
                        std::to_string(p) + ", " + std::to_string(k) + ")");
}

Complex MultFn::evaluate(std::uint64_t n, const SieveTable& table) const {
  if (n == 0) throw DomainError("MultFn::evaluate: n = 0");
  if (smooth_bound_ && table.lpf(n) > *smooth_bound_) return {};
  Complex value{1.0, 0.0};
  for (const auto& [p, e] : table.factorize(n)) value *= at_prime_power(p, e);
  return value;
}

std::vector<PrimePowerValue> MultFn::records(std::uint64_t N) const {
  std::vector<PrimePowerValue> out;
  for (const std::uint32_t p : primes_up_to(N)) {
    std::uint64_t pk = p;
    for (unsigned k = 1;; ++k) {
      out.push_back({p, k, at_prime_power(p, k)});
      if (pk > N / p) break;
      pk *= p;
    }
  }
  return out;
}

MultFn MultFn::with_smooth_bound(std::optional<std::uint64_t> y) const {
  MultFn g = *this;
  if (y && *y < 2) throw DomainError("MultFn: smoothness bound must be >= 2");
  g.smooth_bound_ = y;
  return g;
}

MultFn MultFn::one() {
  return MultFn("one", [](std::uint64_t, unsigned) { return Complex{1.0, 0.0}; });
}

MultFn MultFn::smooth_indicator(std::uint64_t y) {
  return MultFn("smooth-indicator",
                [](std::uint64_t, unsigned) { return Complex{1.0, 0.0}; }, y);
}

MultFn MultFn::mobius_smooth(std::uint64_t y) {
  return MultFn("mobius",
                [](std::uint64_t, unsigned k) { return Complex{k == 1 ? -1.0 : 0.0, 0.0}; },
                y);
}

MultFn MultFn::random_unit_circle(std::uint64_t seed, std::optional<std::uint64_t> y) {
  auto angle = [seed](std::uint64_t p) {
    const std::uint64_t h = splitmix64(seed ^ splitmix64(p));
    return 2.0 * std::numbers::pi * (static_cast<double>(h >> 11) * 0x1.0p-53);
  };
  return MultFn("random-cm(seed=" + std::to_string(seed) + ")",
                [angle](std::uint64_t p, unsigned k) {
                  return std::polar(1.0, std::fmod(k * angle(p), 2.0 * std::numbers::pi));
                },
                y);
}

MultFn MultFn::twisted(const DirichletCharacter& psi, std::uint64_t y) {
  std::ostringstream label;
  label << "twisted(q=" << psi.modulus() << ",idx=" << psi.index() << ")";
  return MultFn(label.str(),
                [psi](std::uint64_t p, unsigned k) {
                  const std::int64_t e = psi.exponent_at(p);
                  if (e < 0) return Complex{};
                  return root_of_unity(static_cast<std::uint64_t>(e) * k % psi.order(),
                                       psi.order());
                },
                y);
}

MultFn MultFn::completely_multiplicative(std::string label,
                                         std::function<Complex(std::uint64_t)> at_prime,
                                         std::optional<std::uint64_t> y) {
  return MultFn(std::move(label),
                [at_prime = std::move(at_prime)](std::uint64_t p, unsigned k) {
                  return cpow(at_prime(p), k);
                },
                y);
}

MultFn MultFn::from_table(std::string label, const std::vector<PrimePowerValue>& entries,
                          Fallback fallback, std::optional<std::uint64_t> y) {
  auto table = std::make_shared<std::map<std::pair<std::uint64_t, unsigned>, Complex>>();
  for (const auto& e : entries) (*table)[{e.p, e.k}] = e.value;
  return MultFn(std::move(label),
                [table, fallback](std::uint64_t p, unsigned k) -> std::optional<Complex> {
                  if (auto it = table->find({p, k}); it != table->end()) return it->second;
                  switch (fallback) {
                    case Fallback::kZero:
                      return Complex{};
                    case Fallback::kCompletelyMultiplicative:
                      if (auto it = table->find({p, 1}); it != table->end())
                        return cpow(it->second, k);
                      return std::nullopt;
                    case Fallback::kError:
                      break;
                  }
                  return std::nullopt;
                },
                y);
}

MultFn restrict_smooth(const MultFn& f, std::uint64_t y) {
  if (y < 2) throw DomainError("restrict_smooth: y must be >= 2");
  const auto cur = f.smooth_bound();
  return f.with_smooth_bound(cur ? std::min(*cur, y) : y);
}

Complex LambdaCoefficient::value() const {
  return p == 0 ? Complex{} : c * std::log(static_cast<double>(p));
}

LambdaF::LambdaF(const MultFn& f, std::uint64_t N) : N_(N), slot_(N + 1, -1) {
  for (const std::uint32_t p : primes_up_to(N)) {
    std::vector<Complex> fp{Complex{1.0, 0.0}};  // f(p^0..k)
    std::vector<Complex> c{Complex{}};           // c_0 unused
    std::uint64_t pk = p;
    for (unsigned k = 1;; ++k) {
      fp.push_back(f.at_prime_power(p, k));
      Complex ck = static_cast<double>(k) * fp[k];
      for (unsigned j = 1; j < k; ++j) ck -= c[j] * fp[k - j];
      c.push_back(ck);
      slot_[pk] = static_cast<std::int64_t>(entries_.size());
      entries_.push_back({p, k, ck});
      if (pk > N / p) break;
      pk *= p;
    }
  }
}

const LambdaCoefficient& LambdaF::at(std::uint64_t n) const {
  static const LambdaCoefficient kZero{};
  if (n > N_) throw RangeError("LambdaF::at: n beyond N");
  const auto s = slot_[n];
  return s < 0 ? kZero : entries_[static_cast<std::size_t>(s)];
}

ClassCCertificate check_class_c(const MultFn& f, std::uint64_t N) {
  ClassCCertificate cert;
  cert.checked_up_to = N;
  const LambdaF lambda(f, N);
  for (const auto& e : lambda.prime_powers())
    cert.max_ratio = std::max(cert.max_ratio, std::abs(e.c));
  return cert;
}

MultFn dirichlet_inverse(const MultFn& f, std::uint64_t N) {
  std::vector<PrimePowerValue> entries;
  for (const std::uint32_t p : primes_up_to(N)) {
    std::vector<Complex> fp{Complex{1.0, 0.0}}, g{Complex{1.0, 0.0}};
    std::uint64_t pk = p;
    for (unsigned k = 1;; ++k) {
      fp.push_back(f.at_prime_power(p, k));
      Complex gk{};
      for (unsigned j = 1; j <= k; ++j) gk -= fp[j] * g[k - j];
      g.push_back(gk);
      entries.push_back({p, k, gk});
      if (pk > N / p) break;
      pk *= p;
    }
  }
  return MultFn::from_table("inverse(" + f.label() + ")", entries,
                            MultFn::Fallback::kError, f.smooth_bound());
}

}  // namespace smoothbv
