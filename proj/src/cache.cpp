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

#include "smoothbv/cache.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "smoothbv/errors.hpp"

namespace smoothbv {

namespace {

std::uint32_t crc(const std::string& s) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string hexfloat(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  return std::string(buf, r.ptr);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>)
    r = std::from_chars(s.data(), end, out, std::chars_format::hex);
  else
    r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc{} && r.ptr == end;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '|' || c == '\n' || c == '\r') c = '_';
  return s;
}

}  // namespace

std::string CacheKey::text() const {
  return function + "|" + std::to_string(X) + "|" + std::to_string(q) + "|" +
         std::to_string(index);
}

std::string function_fingerprint(const MultFn& f, std::uint64_t N) {
  std::string blob;
  for (const auto& r : f.records(N)) {
    blob += std::to_string(r.p) + "," + std::to_string(r.k) + "," + hexfloat(r.value.real()) +
            "," + hexfloat(r.value.imag()) + ";";
  }
  const auto y = f.smooth_bound();
  return sanitize(f.label()) + "@y=" + (y ? std::to_string(*y) : "inf") + "#" + hex32(crc(blob)) +
         "/" + std::to_string(N);
}

std::string CharacterSumCache::format_line(const CacheKey& key, Complex value) {
  const std::string body = "v1|" + sanitize(key.function) + "|" + std::to_string(key.X) + "|" +
                           std::to_string(key.q) + "|" + std::to_string(key.index) + "|" +
                           hexfloat(value.real()) + "|" + hexfloat(value.imag());
  return body + "|" + hex32(crc(body)) + "\n";
}

std::optional<std::pair<CacheKey, Complex>> CharacterSumCache::parse_line(std::string line) {
  if (!line.empty() && line.back() == '\n') line.pop_back();
  const auto bar = line.rfind('|');
  if (bar == std::string::npos) return std::nullopt;
  const std::string body = line.substr(0, bar);
  if (line.substr(bar + 1) != hex32(crc(body))) return std::nullopt;

  std::vector<std::string> f;
  std::stringstream ss(body);
  for (std::string part; std::getline(ss, part, '|');) f.push_back(part);
  if (f.size() != 7 || f[0] != "v1") return std::nullopt;
  CacheKey key;
  key.function = f[1];
  double re = 0, im = 0;
  if (!parse_number(f[2], key.X) || !parse_number(f[3], key.q) ||
      !parse_number(f[4], key.index) || !parse_number(f[5], re) || !parse_number(f[6], im))
    return std::nullopt;
  return std::make_pair(key, Complex{re, im});
}

std::filesystem::path CharacterSumCache::default_dir() {
  if (const char* d = std::getenv("SMOOTHBV_CACHE_DIR"); d && *d) return d;
  return ".smoothbv-cache";
}

CharacterSumCache::CharacterSumCache(std::filesystem::path file, std::uint32_t audit_modulus)
    : path_(std::move(file)), audit_modulus_(audit_modulus == 0 ? 1 : audit_modulus) {
  std::ifstream in(path_);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    if (auto rec = parse_line(line))
      map_.emplace(rec->first.text(), rec->second);
    else
      ++skipped_;
  }
}

CharacterSumCache::~CharacterSumCache() {
  if (out_) std::fclose(out_);
}

std::size_t CharacterSumCache::size() const {
  std::shared_lock lock(map_mu_);
  return map_.size();
}

std::optional<Complex> CharacterSumCache::lookup(const CacheKey& key,
                                                 const std::function<Complex()>& audit) {
  const std::string k = key.text();
  Complex value;
  {
    std::shared_lock lock(map_mu_);
    const auto it = map_.find(k);
    if (it == map_.end()) {
      ++misses_;
      return std::nullopt;
    }
    value = it->second;
  }
  ++hits_;
  if (audit && crc(k) % audit_modulus_ == 0) {
    ++audits_;
    const Complex fresh = audit();
    if (std::abs(fresh - value) > 1e-10 * (1.0 + std::abs(fresh))) {
      quarantine();
      throw IntegrityError("cache audit mismatch for " + k + " in " + path_.string());
    }
  }
  return value;
}

void CharacterSumCache::store(const CacheKey& key, Complex value) {
  {
    std::unique_lock lock(map_mu_);
    if (!map_.emplace(key.text(), value).second) return;
  }
  const std::string line = format_line(key, value);
  std::lock_guard lock(write_mu_);
  if (!out_) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_ = std::fopen(path_.c_str(), "ab+");
    if (!out_) throw Error("cannot open cache file " + path_.string());
    // Terminate a torn last line so the next record starts cleanly.
    if (std::fseek(out_, -1, SEEK_END) == 0 && std::fgetc(out_) != '\n') {
      std::fseek(out_, 0, SEEK_END);
      std::fputc('\n', out_);
    }
  }
  if (std::fwrite(line.data(), 1, line.size(), out_) != line.size() || std::fflush(out_) != 0)
    throw Error("cannot write cache file " + path_.string());
}

Complex CharacterSumCache::get_or_compute(const CacheKey& key,
                                          const std::function<Complex()>& compute) {
  if (auto v = lookup(key, compute)) return *v;
  const Complex v = compute();
  store(key, v);
  return v;
}

void CharacterSumCache::quarantine() {
  std::lock_guard wlock(write_mu_);
  if (out_) {
    std::fclose(out_);
    out_ = nullptr;
  }
  std::error_code ec;
  if (std::filesystem::exists(path_, ec))
    std::filesystem::rename(path_, path_.string() + ".quarantine", ec);
  std::unique_lock lock(map_mu_);
  map_.clear();
}

}  // namespace smoothbv
