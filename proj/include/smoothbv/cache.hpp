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

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "smoothbv/arith.hpp"
#include "smoothbv/multfn.hpp"

namespace smoothbv {

// Identifies S_f(X, chi): function fingerprint, X, modulus and the index of
// chi in enumerate_characters(q).
struct CacheKey {
  std::string function;
  std::uint64_t X = 0;
  std::uint64_t q = 0;
  std::uint64_t index = 0;
  std::string text() const;
};

// label, smoothness bound and a crc32 of f's prime-power values up to N.
std::string function_fingerprint(const MultFn& f, std::uint64_t N);

// Append-only, line-oriented store of character sums. Each line is
//   v1|function|X|q|index|re|im|crc
// with re and im as hex floats and crc the crc32 of everything before it.
// Lines failing the checksum (torn or edited) are skipped on load.
//
// Hits whose key hash is 0 mod audit_modulus are recomputed; a mismatch
// beyond 1e-10 moves the file aside and throws IntegrityError.
class CharacterSumCache {
 public:
  explicit CharacterSumCache(std::filesystem::path file, std::uint32_t audit_modulus = 100);
  ~CharacterSumCache();
  CharacterSumCache(const CharacterSumCache&) = delete;
  CharacterSumCache& operator=(const CharacterSumCache&) = delete;

  // SMOOTHBV_CACHE_DIR, else ./.smoothbv-cache
  static std::filesystem::path default_dir();

  std::optional<Complex> lookup(const CacheKey& key, const std::function<Complex()>& audit);
  void store(const CacheKey& key, Complex value);
  Complex get_or_compute(const CacheKey& key, const std::function<Complex()>& compute);

  const std::filesystem::path& path() const { return path_; }
  std::size_t size() const;
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t audits() const { return audits_; }
  std::size_t skipped_lines() const { return skipped_; }

  // Parses one record line (trailing newline optional); nullopt when malformed or the checksum fails.
  static std::optional<std::pair<CacheKey, Complex>> parse_line(std::string line);
  static std::string format_line(const CacheKey& key, Complex value);

 private:
  void quarantine();

  std::filesystem::path path_;
  std::uint32_t audit_modulus_;
  mutable std::shared_mutex map_mu_;
  std::unordered_map<std::string, Complex> map_;
  std::mutex write_mu_;
  std::FILE* out_ = nullptr;
  std::atomic<std::size_t> hits_{0}, misses_{0}, audits_{0};
  std::size_t skipped_ = 0;
};

}  // namespace smoothbv
