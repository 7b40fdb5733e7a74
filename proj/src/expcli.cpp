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

#include "smoothbv/expcli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include "smoothbv/cache.hpp"
#include "smoothbv/errors.hpp"

namespace smoothbv {

namespace {

using Row = std::vector<std::string>;

std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(std::int64_t v) { return std::to_string(v); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

std::uint64_t resolved_Q(const ExperimentConfig& cfg) {
  if (cfg.Q) return *cfg.Q;
  if (cfg.theta)
    return std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(cfg.x), *cfg.theta) + 1e-9)));
  return 0;
}

const char* weight_name(WeightMode w) {
  return w == WeightMode::kUnweighted ? "unweighted" : "inverse-sqrt";
}

std::vector<std::pair<std::string, std::string>> resolved_config(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> c;
  c.emplace_back("command", command_name(cfg.command));
  c.emplace_back("x", num(cfg.x));
  if (cfg.command != Command::kVerifyIdentities) c.emplace_back("y", num(cfg.y));
  switch (cfg.command) {
    case Command::kPsi:
      if (cfg.q) c.emplace_back("q", num(*cfg.q));
      if (cfg.a) c.emplace_back("a", num(*cfg.a));
      c.emplace_back("decay", num(cfg.decay));
      break;
    case Command::kDelta:
      c.emplace_back("q", num(*cfg.q));
      c.emplace_back("a1", num(cfg.a ? *cfg.a : cfg.a1));
      c.emplace_back("a2", num(cfg.a ? std::int64_t{1} : cfg.a2));
      if (cfg.D) c.emplace_back("D", num(*cfg.D));
      c.emplace_back("f", cfg.function);
      c.emplace_back("xi", cfg.xi);
      break;
    case Command::kBvAverage:
      c.emplace_back("Q", num(resolved_Q(cfg)));
      if (cfg.theta) c.emplace_back("theta", format_number(*cfg.theta));
      c.emplace_back("a1", num(cfg.a1));
      c.emplace_back("a2", num(cfg.a2));
      if (cfg.D) c.emplace_back("D", num(*cfg.D));
      c.emplace_back("f", cfg.function);
      c.emplace_back("xi", cfg.xi);
      break;
    case Command::kLargeSieve:
      c.emplace_back("Q", num(cfg.Q ? *cfg.Q : default_sieve_Q(cfg.x, cfg.y, cfg.weight, cfg.c)));
      c.emplace_back("c", format_number(cfg.c));
      c.emplace_back("weight", weight_name(cfg.weight));
      c.emplace_back("coeffs", cfg.coeffs);
      c.emplace_back("mode", cfg.mode);
      c.emplace_back("trials", num(cfg.trials));
      break;
    case Command::kExceptional:
      c.emplace_back("Q", num(*cfg.Q));
      c.emplace_back("B", format_number(cfg.B));
      c.emplace_back("eps", format_number(cfg.eps));
      c.emplace_back("f", cfg.function);
      c.emplace_back("cache", cfg.use_cache ? "on" : "off");
      break;
    case Command::kVerifyIdentities:
      c.emplace_back("Q", num(cfg.Q.value_or(300)));
      c.emplace_back("trials", num(cfg.trials));
      break;
  }
  c.emplace_back("seed", num(cfg.seed));
  return c;
}

ExceptionalSet resolve_xi(const ExperimentConfig& cfg) {
  if (cfg.xi == "none") return {};
  if (cfg.xi == "trivial") return ExceptionalSet::of({DirichletCharacter::trivial()});
  return ExceptionalSet::of(CharacterFamily(*cfg.D).members());
}

Report run_psi(const ExperimentConfig& cfg) {
  const auto table = SieveTable::build(cfg.x);
  Report r;
  r.columns = {"x", "y", "q", "a", "count", "alpha"};
  const std::uint64_t q = cfg.q.value_or(1);
  std::uint64_t count = 0;
  if (cfg.a)
    count = psi_progression(table, cfg.x, cfg.y, reduce_mod(*cfg.a, q), q);
  else if (cfg.q)
    count = psi_coprime(table, cfg.x, cfg.y, q);
  else
    count = psi(table, cfg.x, cfg.y);
  const double alpha = cfg.x > 1 ? alpha_saddle(static_cast<double>(cfg.x), cfg.y) : 0.0;
  r.rows.push_back({num(cfg.x), num(cfg.y), cfg.q ? num(q) : "", cfg.a ? num(*cfg.a) : "",
                    num(count), format_number(alpha)});
  r.summary.emplace_back("count", num(count));
  if (cfg.decay > 0) {
    // Plot data: Psi(x/l, y) / Psi(x, y) against l^-alpha.
    r.columns = {"l", "X", "psi", "ratio", "l_pow_minus_alpha"};
    r.rows.clear();
    const double base = static_cast<double>(psi(table, cfg.x, cfg.y));
    for (std::uint64_t l = 1; l <= std::min(cfg.decay, cfg.x); ++l) {
      const std::uint64_t X = cfg.x / l;
      const auto p = psi(table, X, cfg.y);
      r.rows.push_back({num(l), num(X), num(p), format_number(static_cast<double>(p) / base),
                        format_number(std::pow(static_cast<double>(l), -alpha))});
    }
  }
  return r;
}

Report run_delta(const ExperimentConfig& cfg) {
  const auto table = SieveTable::build(cfg.x);
  const FunctionTable ft(parse_function(cfg.function, cfg.y, cfg.seed), table, cfg.x);
  const std::int64_t a1 = cfg.a ? *cfg.a : cfg.a1;
  const std::int64_t a2 = cfg.a ? 1 : cfg.a2;
  auto rec = discrepancy_record(ft, cfg.x, *cfg.q, a1, a2, resolve_xi(cfg));
  if (cfg.xi == "none") {
    rec.delta_xi.reset();
    rec.xi_main_term.reset();
  }
  if (cfg.D) rec.delta_A = delta_A(ft, cfg.x, *cfg.q, a1, a2, *cfg.D);
  Report r = discrepancy_report({rec});
  r.summary.emplace_back("progression_sum", format_number(rec.progression_sum.real()));
  r.summary.emplace_back("coprime_main_term", format_number(rec.coprime_main_term.real()));
  return r;
}

Report run_bv(const ExperimentConfig& cfg) {
  const auto table = SieveTable::build(cfg.x);
  const FunctionTable ft(parse_function(cfg.function, cfg.y, cfg.seed), table, cfg.x);
  const auto Q = resolved_Q(cfg);
  const auto bv = bv_average(ft, cfg.x, Q, cfg.a1, cfg.a2, resolve_xi(cfg), cfg.threads);
  Report r = discrepancy_report(bv.records);
  const double p = static_cast<double>(psi(table, cfg.x, cfg.y));
  r.summary.emplace_back("moduli", num(static_cast<std::uint64_t>(bv.records.size())));
  r.summary.emplace_back("total", format_number(bv.total));
  r.summary.emplace_back("psi", format_number(p));
  r.summary.emplace_back("normalized", format_number(bv.total / p));
  return r;
}

Report run_large_sieve(const ExperimentConfig& cfg) {
  const auto table = SieveTable::build(cfg.x);
  const auto Q = cfg.Q ? *cfg.Q : default_sieve_Q(cfg.x, cfg.y, cfg.weight, cfg.c);
  const LargeSieveMatrix M(table, cfg.x, cfg.y, Q, cfg.weight, cfg.threads);
  Report r;
  r.columns = {"mode", "coeffs", "lhs", "rhs", "ratio"};
  auto add = [&](const std::string& mode, const SieveRatio& s) {
    r.rows.push_back({mode, cfg.coeffs, format_number(s.lhs), format_number(s.rhs),
                      format_number(s.ratio)});
  };
  const bool dual = cfg.mode == "dual";
  if (cfg.coeffs == "ones") {
    if (dual)
      add("dual", ls_dual(M, std::vector<Complex>(M.rows(), Complex{1.0, 0.0})));
    else
      add("primal", ls_primal(M, std::vector<Complex>(M.cols(), Complex{1.0, 0.0})));
  } else if (cfg.coeffs == "random-sign") {
    const double best = random_sign_max_ratio(M, cfg.trials, cfg.seed);
    r.rows.push_back({"primal", cfg.coeffs, "", "", format_number(best)});
  } else if (cfg.coeffs == "random-complex") {
    std::mt19937_64 rng(cfg.seed);
    auto draw = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    std::vector<Complex> v(dual ? M.rows() : M.cols());
    for (auto& z : v) {
      const double re = draw();
      z = Complex{re, draw()};
    }
    add(cfg.mode, dual ? ls_dual(M, v) : ls_primal(M, v));
  } else {
    const auto p = max_ratio_primal(M, cfg.seed);
    const auto d = max_ratio_dual(M, cfg.seed + 1);
    r.columns.push_back("iterations");
    const double psi_d = static_cast<double>(M.psi());
    r.rows.push_back({"primal", cfg.coeffs, format_number(p.ratio * psi_d), format_number(psi_d),
                      format_number(p.ratio), num(static_cast<std::uint64_t>(p.iterations))});
    r.rows.push_back({"dual", cfg.coeffs, format_number(d.ratio * psi_d), format_number(psi_d),
                      format_number(d.ratio), num(static_cast<std::uint64_t>(d.iterations))});
  }
  r.summary.emplace_back("psi", num(M.psi()));
  r.summary.emplace_back("characters", num(static_cast<std::uint64_t>(M.rows())));
  return r;
}

Report run_exceptional(const ExperimentConfig& cfg) {
  const auto table = SieveTable::build(cfg.x);
  const FunctionTable ft(parse_function(cfg.function, cfg.y, cfg.seed), table, cfg.x);
  std::optional<CharacterSumCache> cache;
  if (cfg.use_cache) cache.emplace(cache_file(cfg));
  const auto rep = detect_exceptional(ft, table, cfg.x, cfg.y, *cfg.Q, cfg.B, cfg.eps,
                                      cache ? &*cache : nullptr, cfg.threads);
  Report r;
  r.columns = {"kind", "r", "index", "order", "X", "value", "threshold"};
  for (const auto& m : rep.set.members())
    r.rows.push_back({"member", num(m.psi.modulus()), num(m.psi.index()), num(m.psi.order()),
                      num(m.witness_X), format_number(m.witness_value),
                      format_number(m.threshold)});
  for (const auto& m : rep.near_misses)
    r.rows.push_back({"near-miss", num(m.psi.modulus()), num(m.psi.index()), num(m.psi.order()),
                      num(m.X), format_number(m.value), format_number(m.threshold)});
  const auto counts = exceptional_counts(rep.set, cfg.x, cfg.B);
  r.summary.emplace_back("T", format_number(rep.T));
  r.summary.emplace_back("grid_points", num(static_cast<std::uint64_t>(rep.grid.size())));
  r.summary.emplace_back("count", num(static_cast<std::uint64_t>(counts.count)));
  r.summary.emplace_back("weighted", format_number(counts.weighted));
  r.summary.emplace_back("beta", format_number(rep.set.beta()));
  r.summary.emplace_back("log_bound", format_number(counts.bound));
  return r;
}

Report run_verify(const ExperimentConfig& cfg) {
  const std::uint64_t qmax = cfg.Q.value_or(300);
  const auto table = SieveTable::build(cfg.x);
  Report r;
  r.columns = {"identity", "cases", "max_residual", "failures"};
  auto add = [&](const char* name, std::uint64_t cases, double worst, std::uint64_t fails) {
    r.rows.push_back({name, num(cases), format_number(worst), num(fails)});
  };

  {
    const CharacterFamily family(30);
    std::uint64_t cases = 0, fails = 0;
    double worst = 0;
    for (std::uint64_t q = 1; q <= qmax; ++q)
      for (const std::uint64_t D : {1, 2, 3, 5, 10, 20, 30}) {
        const auto exact = u_kernel_moebius_table(q, D);
        const auto chars = u_kernel_chardef_table(q, D, family);
        for (std::uint64_t n = 0; n < q; ++n, ++cases) {
          const double e = static_cast<double>(exact[n].numerator()) /
                           static_cast<double>(exact[n].denominator());
          const double err = std::abs(chars[n] - e);
          worst = std::max(worst, err);
          if (err > 1e-10) ++fails;
        }
      }
    add("kernel", cases, worst, fails);
  }

  {
    std::mt19937_64 rng(cfg.seed);
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };
    auto unit = [&](std::uint64_t q) {
      for (;;) {
        const auto a = static_cast<std::int64_t>(pick(1, 1000));
        if (std::gcd(static_cast<std::uint64_t>(a), q) == 1) return rng() & 1 ? a : -a;
      }
    };
    double worst = 0;
    std::uint64_t fails = 0;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
      const auto q = pick(1, 30), D = pick(1, 10), x = pick(1, cfg.x);
      const auto y = pick(2, 100);
      const MultFn f = restrict_smooth(MultFn::random_unit_circle(rng()), y);
      const FunctionTable ft(f, table, x);
      ExceptionalSet xi;
      for (const auto& psi : CharacterFamily(D).members())
        if (rng() & 1) xi.add(psi);
      const auto chk = verify_transfer_identity(ft, x, q, unit(q), unit(q), xi, D);
      const double rel = chk.residual / (1.0 + std::abs(chk.lhs));
      worst = std::max(worst, rel);
      if (rel > 1e-8) ++fails;
    }
    add("transfer", cfg.trials, worst, fails);
  }

  {
    const std::uint64_t x = cfg.x;
    const FunctionTable ft(MultFn::random_unit_circle(cfg.seed), table, x);
    double worst = 0;
    std::uint64_t cases = 0, fails = 0;
    for (std::uint64_t q = 1; q <= std::min<std::uint64_t>(60, qmax); ++q)
      for (const auto& chi : enumerate_characters(q)) {
        const auto chk = verify_convolution_identity(ft, x, chi);
        const double rel = chk.residual / (1.0 + std::abs(chk.lhs));
        worst = std::max(worst, rel);
        fails += rel > 1e-8;
        ++cases;
      }
    add("convolution", cases, worst, fails);
  }
  return r;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::kPsi: return "psi";
    case Command::kDelta: return "delta";
    case Command::kBvAverage: return "bv-average";
    case Command::kLargeSieve: return "large-sieve";
    case Command::kExceptional: return "exceptional";
    case Command::kVerifyIdentities: return "verify-identities";
  }
  return "?";
}

void validate(const ExperimentConfig& cfg) {
  require(cfg.x >= 1 && cfg.x <= kMaxSieveLimit, "x must be in [1, 1e8]");
  require(cfg.threads >= 1 && cfg.threads <= 256, "threads must be in [1, 256]");
  const bool needs_y = cfg.command != Command::kVerifyIdentities;
  if (needs_y) require(cfg.y >= 2, "y must be >= 2");
  if (cfg.q) require(*cfg.q >= 1 && *cfg.q <= kMaxCharacterModulus, "q must be in [1, 1e6]");
  if (cfg.D) require(*cfg.D >= 1 && *cfg.D <= 1000, "D must be in [1, 1000]");
  require(cfg.xi == "none" || cfg.xi == "trivial" || cfg.xi == "A", "xi must be none, trivial or A");
  if (cfg.xi == "A") require(cfg.D.has_value(), "xi = A needs D");
  require(cfg.function == "smooth-indicator" || cfg.function == "mobius" ||
              cfg.function == "random-cm" || cfg.function.rfind("twisted:", 0) == 0,
          "unknown function '" + cfg.function + "'");

  auto unit = [&](std::int64_t a, std::uint64_t q, const char* name) {
    require(std::gcd(reduce_mod(a, q), q) == 1, std::string(name) + " must be coprime to q");
  };
  switch (cfg.command) {
    case Command::kPsi:
      if (cfg.a) require(cfg.q.has_value(), "a needs q");
      break;
    case Command::kDelta:
      require(cfg.q.has_value(), "delta needs q");
      if (cfg.a) {
        unit(*cfg.a, *cfg.q, "a");
      } else {
        unit(cfg.a1, *cfg.q, "a1");
        unit(cfg.a2, *cfg.q, "a2");
      }
      break;
    case Command::kBvAverage: {
      require(cfg.Q.has_value() != cfg.theta.has_value(), "bv-average needs exactly one of Q, theta");
      if (cfg.theta) require(*cfg.theta > 0 && *cfg.theta <= 1, "theta must be in (0, 1]");
      const auto Q = resolved_Q(cfg);
      require(Q >= 1 && Q <= cfg.x, "Q must be in [1, x]");
      require(cfg.a1 != 0 && cfg.a2 != 0, "a1 and a2 must be nonzero");
      break;
    }
    case Command::kLargeSieve:
      require(cfg.x >= 3, "large-sieve needs x >= 3");
      if (cfg.Q) require(*cfg.Q >= 1 && *cfg.Q <= 1000, "Q must be in [1, 1000]");
      require(cfg.c > 0 && cfg.c < 1, "c must be in (0, 1)");
      require(cfg.coeffs == "ones" || cfg.coeffs == "random-sign" ||
                  cfg.coeffs == "random-complex" || cfg.coeffs == "power",
              "coeffs must be ones, random-sign, random-complex or power");
      require(cfg.mode == "primal" || cfg.mode == "dual", "mode must be primal or dual");
      require(cfg.trials >= 1, "trials must be >= 1");
      break;
    case Command::kExceptional:
      require(cfg.x >= 16, "exceptional needs x >= 16");
      require(cfg.Q.has_value() && *cfg.Q >= 1 && *cfg.Q <= 1000, "Q must be in [1, 1000]");
      require(cfg.B >= 0, "B must be >= 0");
      require(cfg.eps > 0 && cfg.eps <= 1, "eps must be in (0, 1]");
      break;
    case Command::kVerifyIdentities:
      require(cfg.x <= 1'000'000, "verify-identities needs x <= 1e6");
      if (cfg.Q) require(*cfg.Q >= 1 && *cfg.Q <= 1000, "Q must be in [1, 1000]");
      break;
  }
}

MultFn parse_function(const std::string& name, std::uint64_t y, std::uint64_t seed) {
  if (name == "smooth-indicator") return MultFn::smooth_indicator(y);
  if (name == "mobius") return MultFn::mobius_smooth(y);
  if (name == "random-cm") return MultFn::random_unit_circle(seed, y);
  if (name.rfind("twisted:", 0) == 0) {
    std::uint64_t r = 0, idx = 0;
    const auto colon = name.find(':', 8);
    const char* s = name.data();
    const bool ok =
        colon != std::string::npos &&
        std::from_chars(s + 8, s + colon, r).ptr == s + colon &&
        std::from_chars(s + colon + 1, s + name.size(), idx).ptr == s + name.size();
    if (!ok || r == 0 || r > kMaxCharacterModulus) throw UsageError("bad function name " + name);
    const auto chars = enumerate_characters(r);
    if (idx >= chars.size()) throw UsageError("character index out of range in " + name);
    return MultFn::twisted(chars[idx], y);
  }
  throw UsageError("unknown function '" + name + "'");
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

Report discrepancy_report(const std::vector<DiscrepancyRecord>& records) {
  Report r;
  r.columns = {"q", "a1", "a2", "delta_re", "delta_im", "delta_abs"};
  const bool xi = std::any_of(records.begin(), records.end(),
                              [](const DiscrepancyRecord& d) { return d.delta_xi.has_value(); });
  const bool A = std::any_of(records.begin(), records.end(),
                             [](const DiscrepancyRecord& d) { return d.delta_A.has_value(); });
  if (xi) r.columns.insert(r.columns.end(), {"delta_xi_re", "delta_xi_im", "delta_xi_abs"});
  if (A) r.columns.insert(r.columns.end(), {"delta_A_re", "delta_A_im", "delta_A_abs"});
  auto put = [](Row& row, const std::optional<Complex>& z) {
    if (z) {
      row.push_back(format_number(z->real()));
      row.push_back(format_number(z->imag()));
      row.push_back(format_number(std::abs(*z)));
    } else {
      row.insert(row.end(), 3, "");
    }
  };
  for (const auto& d : records) {
    Row row{num(d.q), num(d.a1), num(d.a2)};
    put(row, d.delta);
    if (xi) put(row, d.delta_xi);
    if (A) put(row, d.delta_A);
    r.rows.push_back(std::move(row));
  }
  return r;
}

void emit_report(const Report& report, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.config) j["config"][k] = v;
    j["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.summary) j["summary"][k] = v;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
      nlohmann::ordered_json rec = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < report.columns.size(); ++i) rec[report.columns[i]] = row.at(i);
      j["records"].push_back(std::move(rec));
    }
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : report.config) out << "# " << k << ": " << v << '\n';
  for (const auto& [k, v] : report.summary) out << "# summary." << k << ": " << v << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i)
    out << (i ? "," : "") << report.columns[i];
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::filesystem::path cache_file(const ExperimentConfig& cfg) {
  return cfg.cache_dir.value_or(CharacterSumCache::default_dir()) / "character_sums.v1.log";
}

Report run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  Report r;
  switch (cfg.command) {
    case Command::kPsi: r = run_psi(cfg); break;
    case Command::kDelta: r = run_delta(cfg); break;
    case Command::kBvAverage: r = run_bv(cfg); break;
    case Command::kLargeSieve: r = run_large_sieve(cfg); break;
    case Command::kExceptional: r = run_exceptional(cfg); break;
    case Command::kVerifyIdentities: r = run_verify(cfg); break;
  }
  r.config = resolved_config(cfg);
  return r;
}

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  auto fail = [&](int code, const char* kind, const std::string& msg) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = msg;
    j["exit"] = code;
    err << j.dump() << '\n';
    return code;
  };
  try {
    const Report report = run_experiment(cfg);
    if (cfg.out == "-") {
      emit_report(report, cfg.format, out);
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) return fail(1, "io", "cannot open " + cfg.out);
      emit_report(report, cfg.format, f);
      if (!f.flush()) return fail(1, "io", "cannot write " + cfg.out);
    }
    return 0;
  } catch (const UsageError& e) {
    return fail(2, "usage", e.what());
  } catch (const IntegrityError& e) {
    return fail(3, "integrity", e.what());
  } catch (const std::exception& e) {
    return fail(1, "error", e.what());
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Smooth-number discrepancy and large sieve experiments", "smoothbv"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string format = "csv";
  std::string weight = "unweighted";
  std::optional<std::string> cache_dir;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "worker threads");
    sub->add_option("--out", cfg.out, "report path, - for stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--cache,!--no-cache", cfg.use_cache, "use the character-sum cache");
    sub->add_option("--cache-dir", cache_dir, "cache directory");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--x", cfg.x, "upper limit x")->required();
  };
  auto with_f = [&](CLI::App* sub) {
    sub->add_option("--f", cfg.function,
                    "smooth-indicator | mobius | random-cm | twisted:R:I");
  };

  auto* psi_cmd = app.add_subcommand("psi", "count smooth numbers");
  common(psi_cmd);
  psi_cmd->add_option("--y", cfg.y)->required();
  psi_cmd->add_option("--q", cfg.q);
  psi_cmd->add_option("--a", cfg.a);
  psi_cmd->add_option("--decay", cfg.decay, "emit Psi(x/l, y)/Psi(x, y) for l <= decay");

  auto* delta_cmd = app.add_subcommand("delta", "discrepancy in one progression");
  common(delta_cmd);
  with_f(delta_cmd);
  delta_cmd->add_option("--y", cfg.y)->required();
  delta_cmd->add_option("--q", cfg.q)->required();
  auto* a_opt = delta_cmd->add_option("--a", cfg.a);
  delta_cmd->add_option("--a1", cfg.a1)->excludes(a_opt);
  delta_cmd->add_option("--a2", cfg.a2)->excludes(a_opt);
  delta_cmd->add_option("--D", cfg.D);
  delta_cmd->add_option("--xi", cfg.xi, "none | trivial | A");

  auto* bv_cmd = app.add_subcommand("bv-average", "average of |Delta_Xi| over moduli");
  common(bv_cmd);
  with_f(bv_cmd);
  bv_cmd->add_option("--y", cfg.y)->required();
  bv_cmd->add_option("--Q", cfg.Q);
  bv_cmd->add_option("--theta", cfg.theta, "Q = floor(x^theta)");
  bv_cmd->add_option("--a1", cfg.a1);
  bv_cmd->add_option("--a2", cfg.a2);
  bv_cmd->add_option("--D", cfg.D);
  bv_cmd->add_option("--xi", cfg.xi, "none | trivial | A")->default_str("trivial");

  auto* ls_cmd = app.add_subcommand("large-sieve", "large sieve ratios");
  common(ls_cmd);
  ls_cmd->add_option("--y", cfg.y)->required();
  ls_cmd->add_option("--Q", cfg.Q);
  ls_cmd->add_option("--c", cfg.c, "exponent for the default Q");
  ls_cmd->add_option("--weight", weight)->check(CLI::IsMember({"unweighted", "inverse-sqrt"}));
  ls_cmd->add_option("--coeffs", cfg.coeffs, "ones | random-sign | random-complex | power");
  ls_cmd->add_option("--mode", cfg.mode, "primal | dual");
  ls_cmd->add_option("--trials", cfg.trials);

  auto* ex_cmd = app.add_subcommand("exceptional", "detect exceptional characters");
  common(ex_cmd);
  with_f(ex_cmd);
  ex_cmd->add_option("--y", cfg.y)->required();
  ex_cmd->add_option("--Q", cfg.Q)->required();
  ex_cmd->add_option("--B", cfg.B);
  ex_cmd->add_option("--eps", cfg.eps);

  auto* vi_cmd = app.add_subcommand("verify-identities", "kernel, transfer and convolution checks");
  common(vi_cmd);
  vi_cmd->add_option("--Q", cfg.Q, "largest modulus in the kernel grid");
  vi_cmd->add_option("--trials", cfg.trials, "random transfer-identity tuples");

  bool bv_xi_set = false;
  try {
    app.parse(argc, argv);
    bv_xi_set = bv_cmd->count("--xi") > 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    nlohmann::ordered_json j;
    j["error"] = "usage";
    j["message"] = e.what();
    j["exit"] = 2;
    std::cerr << j.dump() << '\n';
    return 2;
  }

  const std::pair<CLI::App*, Command> cmds[] = {
      {psi_cmd, Command::kPsi},           {delta_cmd, Command::kDelta},
      {bv_cmd, Command::kBvAverage},      {ls_cmd, Command::kLargeSieve},
      {ex_cmd, Command::kExceptional},    {vi_cmd, Command::kVerifyIdentities}};
  for (const auto& [sub, c] : cmds)
    if (sub->parsed()) cfg.command = c;
  if (cfg.command == Command::kBvAverage && !bv_xi_set) cfg.xi = "trivial";
  cfg.format = format == "json" ? Format::kJson : Format::kCsv;
  cfg.weight = weight == "inverse-sqrt" ? WeightMode::kInverseSqrt : WeightMode::kUnweighted;
  if (cache_dir) cfg.cache_dir = *cache_dir;
  return run(cfg, std::cout, std::cerr);
}

}  // namespace smoothbv
