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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smoothbv/arith.hpp"
#include "smoothbv/characters.hpp"
#include "smoothbv/smooth_sieve.hpp"

namespace smoothbv {

struct PrimePowerValue {
  std::uint64_t p;
  unsigned k;
  Complex value;
};

// A multiplicative function given by its values f(p^k), with f(1) = 1 and an
// optional smoothness bound y (f(n) = 0 whenever P(n) > y). Immutable; copies
// share the oracle.
class MultFn {
 public:
  using Oracle = std::function<std::optional<Complex>(std::uint64_t p, unsigned k)>;

  // How from_table answers prime powers that were not listed.
  enum class Fallback {
    kError,                     // EvaluationError
    kZero,                      // f(p^k) = 0
    kCompletelyMultiplicative,  // f(p)^k when f(p) is listed, else error
  };

  MultFn(std::string label, Oracle oracle,
         std::optional<std::uint64_t> smooth_bound = std::nullopt);

  const std::string& label() const { return label_; }
  std::optional<std::uint64_t> smooth_bound() const { return smooth_bound_; }

  // f(p^k) including the smoothness restriction; throws EvaluationError
  // naming (p, k) when the oracle has no value.
  Complex at_prime_power(std::uint64_t p, unsigned k) const;

  Complex evaluate(std::uint64_t n, const SieveTable& table) const;

  // (p, k, f(p^k)) for every prime power p^k <= N, p ascending then k.
  std::vector<PrimePowerValue> records(std::uint64_t N) const;

  MultFn with_smooth_bound(std::optional<std::uint64_t> y) const;

  static MultFn one();
  static MultFn smooth_indicator(std::uint64_t y);
  static MultFn mobius_smooth(std::uint64_t y);
  // Completely multiplicative with f(p) = e(theta_p), theta_p hashed from
  // (seed, p).
  static MultFn random_unit_circle(std::uint64_t seed,
                                   std::optional<std::uint64_t> y = std::nullopt);
  // f(n) = psi(n) restricted to y-smooth n.
  static MultFn twisted(const DirichletCharacter& psi, std::uint64_t y);
  static MultFn completely_multiplicative(std::string label,
                                          std::function<Complex(std::uint64_t)> at_prime,
                                          std::optional<std::uint64_t> y = std::nullopt);
  static MultFn from_table(std::string label, const std::vector<PrimePowerValue>& entries,
                           Fallback fallback = Fallback::kCompletelyMultiplicative,
                           std::optional<std::uint64_t> y = std::nullopt);

 private:
  std::string label_;
  std::shared_ptr<const Oracle> oracle_;
  std::optional<std::uint64_t> smooth_bound_;
};

MultFn restrict_smooth(const MultFn& f, std::uint64_t y);

// Lambda_f(p^k) = c * log p; Lambda_f vanishes off prime powers (p = 0).
struct LambdaCoefficient {
  std::uint64_t p = 0;
  unsigned k = 0;
  Complex c{};
  Complex value() const;
};

// Coefficients of -F'/F for n <= N from the recursion
//   k log p f(p^k) = sum_{j=1..k} Lambda_f(p^j) f(p^{k-j}).
class LambdaF {
 public:
  LambdaF(const MultFn& f, std::uint64_t N);
  std::uint64_t N() const { return N_; }
  const LambdaCoefficient& at(std::uint64_t n) const;
  // Nonzero-support entries (prime powers), ascending.
  const std::vector<LambdaCoefficient>& prime_powers() const { return entries_; }

 private:
  std::uint64_t N_;
  std::vector<LambdaCoefficient> entries_;
  std::vector<std::int64_t> slot_;  // n -> index into entries_, -1 otherwise
};

inline LambdaF lambda_f(const MultFn& f, std::uint64_t N) { return LambdaF(f, N); }

struct ClassCCertificate {
  std::uint64_t checked_up_to = 0;
  // max over p^k <= N of |Lambda_f(p^k)| / Lambda(p^k)
  double max_ratio = 0.0;
  static constexpr double kSlack = 1e-12;
  bool valid() const { return max_ratio <= 1.0 + kSlack; }
};

ClassCCertificate check_class_c(const MultFn& f, std::uint64_t N);

// g with F G = 1, tabulated on prime powers <= N by
//   g(p^k) = -sum_{j=1..k} f(p^j) g(p^{k-j}).
MultFn dirichlet_inverse(const MultFn& f, std::uint64_t N);

}  // namespace smoothbv
