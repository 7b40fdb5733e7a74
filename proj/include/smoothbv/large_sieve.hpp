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
#include <span>
#include <vector>

#include "smoothbv/characters.hpp"
#include "smoothbv/discrepancy.hpp"
#include "smoothbv/smooth_sieve.hpp"

namespace smoothbv {

class CharacterSumCache;

enum class WeightMode { kUnweighted, kInverseSqrt };

// Q = min(y^c, exp(c log x / log log x)) unweighted, x^c weighted; at least 1.
std::uint64_t default_sieve_Q(std::uint64_t x, std::uint64_t y, WeightMode mode, double c = 0.2);

// M[(q, chi), n] = w(q)^{1/2} chi(n) for primitive chi mod q <= Q and
// y-smooth n <= x. Rows follow CharacterFamily order, columns ascending n.
class LargeSieveMatrix {
 public:
  LargeSieveMatrix(const SieveTable& table, std::uint64_t x, std::uint64_t y, std::uint64_t Q,
                   WeightMode mode = WeightMode::kUnweighted, unsigned threads = 1);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return smooth_.size(); }
  std::uint64_t psi() const { return smooth_.size(); }
  std::span<const std::uint32_t> smooth() const { return smooth_.members(); }
  const std::vector<DirichletCharacter>& characters() const { return rows_; }

  std::vector<Complex> apply(std::span<const Complex> a) const;            // M a
  std::vector<Complex> apply_conj(std::span<const Complex> a) const;       // conj(M) a
  std::vector<Complex> apply_adjoint(std::span<const Complex> b) const;    // M^* b
  std::vector<Complex> apply_transpose(std::span<const Complex> b) const;  // M^T b

 private:
  struct Block {
    std::uint64_t q;
    double scale;
    std::size_t first, last;  // row range
    std::vector<std::vector<std::int32_t>> exps;
    std::vector<std::uint64_t> orders;
  };
  std::vector<Complex> rows_from_columns(std::span<const Complex> a, bool conjugate) const;
  std::vector<Complex> columns_from_rows(std::span<const Complex> b, bool conjugate) const;

  SmoothSet smooth_;
  std::vector<DirichletCharacter> rows_;
  std::vector<Block> blocks_;
  unsigned threads_;
};

struct SieveRatio {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // 0 when rhs = 0
};

// a is indexed by n (a[0] ignored, size x + 1); throws DomainError when a
// is nonzero at a non-smooth n.
SieveRatio ls_primal(const SieveTable& table, std::uint64_t x, std::uint64_t y, std::uint64_t Q,
                     std::span<const Complex> a, WeightMode mode = WeightMode::kUnweighted,
                     unsigned threads = 1);
SieveRatio ls_primal(const LargeSieveMatrix& M, std::span<const Complex> a_smooth);

// b is indexed by the rows of the unweighted matrix.
SieveRatio ls_dual(const SieveTable& table, std::uint64_t x, std::uint64_t y, std::uint64_t Q,
                   std::span<const Complex> b, unsigned threads = 1);
SieveRatio ls_dual(const LargeSieveMatrix& M, std::span<const Complex> b);

struct NormEstimate {
  double ratio = 0.0;  // largest eigenvalue / psi
  std::size_t iterations = 0;
};

// Power iteration for max ||M a||^2 / (psi ||a||^2) and for
// max ||M^T b||^2 / (psi ||b||^2). At least min_iter steps, then until the
// Rayleigh quotient settles.
NormEstimate max_ratio_primal(const LargeSieveMatrix& M, std::uint64_t seed,
                              std::size_t min_iter = 200, std::size_t max_iter = 20000);
NormEstimate max_ratio_dual(const LargeSieveMatrix& M, std::uint64_t seed,
                            std::size_t min_iter = 200, std::size_t max_iter = 20000);

// Largest primal ratio over `count` random +-1 coefficient vectors.
double random_sign_max_ratio(const LargeSieveMatrix& M, std::size_t count, std::uint64_t seed);

struct EtaMember {
  DirichletCharacter chi;
  double abs_sum;
};

struct EtaClass {
  unsigned k;  // eta = 2^-k
  double eta;
  std::vector<EtaMember> xi_eta;
  std::vector<DirichletCharacter> xi_star_eta;  // sorted, distinct
};

// Non-principal chi mod q <= Q^2 with eta Psi < |sum_{smooth n <= x} chi(n)| <= 2 eta Psi,
// for eta = 1/2, ..., 2^-k_max. Boundary ties are settled exactly.
std::vector<EtaClass> classify_eta(const SieveTable& table, std::uint64_t x, std::uint64_t y,
                                   std::uint64_t Q, unsigned k_max = 16, unsigned threads = 1);

// T = max(1, (u log u)^4) (log x)^B with u = log x / log y.
double exceptional_T(std::uint64_t x, std::uint64_t y, double B);

struct NearMiss {
  DirichletCharacter psi;
  std::uint64_t X;
  double value;
  double threshold;
};

struct DetectionReport {
  ExceptionalSet set;
  std::vector<NearMiss> near_misses;  // best |S| / threshold in [1/2, 1)
  double T = 0.0;
  std::vector<std::uint64_t> grid;
};

// Scans every primitive psi mod r <= Q over the grid dyadic_partition(x, T, eps),
// reporting psi at the first X_j with |S_f(X_j, psi)| >= Psi(X_j, y) / (2T).
DetectionReport detect_exceptional(const FunctionTable& ft, const SieveTable& table,
                                   std::uint64_t x, std::uint64_t y, std::uint64_t Q, double B,
                                   double eps = 0.25, CharacterSumCache* cache = nullptr,
                                   unsigned threads = 1);

struct ExceptionalCounts {
  std::size_t count = 0;
  double weighted = 0.0;  // sum r^{-1/2}
  double bound = 0.0;     // (log x)^{3B + 13}, for context only
};
ExceptionalCounts exceptional_counts(const ExceptionalSet& set, std::uint64_t x, double B);

}  // namespace smoothbv
