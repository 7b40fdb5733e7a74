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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smoothbv/discrepancy.hpp"
#include "smoothbv/large_sieve.hpp"
#include "smoothbv/multfn.hpp"

namespace smoothbv {

enum class Command { kPsi, kDelta, kBvAverage, kLargeSieve, kExceptional, kVerifyIdentities };
enum class Format { kCsv, kJson };

const char* command_name(Command c);

struct ExperimentConfig {
  Command command = Command::kPsi;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::optional<std::uint64_t> q;
  std::optional<std::int64_t> a;
  std::int64_t a1 = 1;
  std::int64_t a2 = 1;
  std::optional<std::uint64_t> Q;
  std::optional<double> theta;  // Q = floor(x^theta)
  std::optional<std::uint64_t> D;
  double B = 1.0;
  double eps = 0.25;
  double c = 0.2;
  WeightMode weight = WeightMode::kUnweighted;
  std::string coeffs = "ones";  // ones | random-sign | random-complex | power
  std::string mode = "primal";  // primal | dual
  std::string function = "smooth-indicator";
  std::string xi = "none";      // none | trivial | A
  std::uint64_t trials = 100;
  std::uint64_t decay = 0;      // psi: emit l = 1..decay decay rows
  std::uint64_t seed = 0;
  unsigned threads = 1;

  std::string out = "-";
  Format format = Format::kCsv;
  bool use_cache = false;
  std::optional<std::filesystem::path> cache_dir;
};

// Throws UsageError for out-of-range parameters; touches no tables.
void validate(const ExperimentConfig& cfg);

// smooth-indicator | mobius | random-cm | twisted:R:I, all restricted to
// y-smooth support.
MultFn parse_function(const std::string& name, std::uint64_t y, std::uint64_t seed);

// Homogeneous rows with a resolved config and summary block.
struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// 12 significant digits, locale independent, "-0" printed as "0".
std::string format_number(double v);

// Columns q, a1, a2, delta_re, delta_im, delta_abs, followed by
// delta_xi_* and delta_A_* when the records carry them.
Report discrepancy_report(const std::vector<DiscrepancyRecord>& records);

// CSV: "# key: value" lines for config and summary, header, rows.
// JSON: {"config": {...}, "summary": {...}, "records": [{...}]}, values as strings.
void emit_report(const Report& report, Format format, std::ostream& out);

std::filesystem::path cache_file(const ExperimentConfig& cfg);

Report run_experiment(const ExperimentConfig& cfg);

// Validates, runs and writes the report. Returns 0, 2 (usage), 3 (cache
// integrity) or 1, writing a JSON error record to err on failure.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv and calls run.
int cli_main(int argc, char** argv);

}  // namespace smoothbv
