#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lehmer/analysis.hpp"
#include "lehmer/counting.hpp"
#include "lehmer/error.hpp"
#include "lehmer/expsum.hpp"
#include "lehmer/report_io.hpp"

namespace lehmer::cli {

namespace {

using nlohmann::json;

enum class Format { Csv, Json, Pretty };

struct Options {
  u64 q = 0;
  u64 q_min = 0;
  u64 q_max = 0;
  std::string family;
  std::string k;
  std::string m;
  std::string a;
  std::string lambda;
  u64 samples = 0;
  u64 seed = kDefaultSeed;
  int jobs = 0;
  Format format = Format::Pretty;
  std::string out_path;
  std::string in_path;
  u64 work_budget = kDefaultWorkBudget;
  bool timing = false;
  bool identities = false;
  bool bounds = false;
  bool weil = false;
  u64 l_max = 0;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<i64> parse_vector(const std::string& text, const std::string& flag) {
  std::vector<i64> out;
  if (text.empty()) throw ValidationError(flag + ": missing value");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(item, &used));
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size()) {
      throw ValidationError(flag + ": cannot parse '" + text + "' as comma-separated integers");
    }
  }
  if (!text.empty() && text.back() == ',') {
    throw ValidationError(flag + ": trailing comma in '" + text + "'");
  }
  return out;
}

std::vector<u64> parse_positive_vector(const std::string& text, const std::string& flag) {
  std::vector<u64> out;
  for (i64 v : parse_vector(text, flag)) {
    if (v < 1) throw ValidationError(flag + ": entries must be >= 1, got " + std::to_string(v));
    out.push_back(static_cast<u64>(v));
  }
  return out;
}

ProblemSpec spec_from(const Options& o) {
  auto k = parse_vector(o.k, "--k");
  auto m = parse_positive_vector(o.m, "--m");
  auto a = o.a.empty() ? std::vector<i64>(m.size(), 0) : parse_vector(o.a, "--a");
  if (k.size() != m.size() || k.size() != a.size()) {
    throw ValidationError("--k, --m and --a must have equal lengths (got " + std::to_string(k.size()) +
                          ", " + std::to_string(m.size()) + ", " + std::to_string(a.size()) + ")");
  }
  for (i64 kj : k) {
    if (kj == 0) throw ValidationError("--k: k contains zero component; exponents must be nonzero");
  }
  return ProblemSpec(std::move(k), std::move(m), std::move(a));
}

void require_budget(u64 work, u64 budget) {
  if (work > budget) {
    throw Error(Errc::RangeTooLarge, "estimated work " + std::to_string(work) +
                                         " modular operations exceeds --work-budget " +
                                         std::to_string(budget));
  }
}

u64 single_q_work(u64 q, std::size_t s) {
  return q > kDefaultWorkBudget * 100 / std::max<std::size_t>(s, 1) ? ~u64{0} : q * s;
}

void require_q(const Options& o) {
  if (o.q == 0) throw ValidationError("--q is required");
}

class Emitter {
 public:
  Emitter(const Options& o, std::ostream& out) : out_(&out) {
    if (!o.out_path.empty()) {
      file_.open(o.out_path);
      if (!file_) throw ValidationError("--out: cannot open '" + o.out_path + "' for writing");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

RunMeta meta_for(const Options& o, std::chrono::steady_clock::time_point start) {
  RunMeta meta;
  meta.seed = o.seed;
  if (o.timing) {
    meta.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return meta;
}

int cmd_count(const Options& o, std::ostream& out) {
  require_q(o);
  const auto spec = spec_from(o);
  const Modulus q(o.q);
  require_budget(single_q_work(o.q, spec.s()), o.work_budget);
  const auto report = count_report(q, spec, o.jobs);
  switch (o.format) {
    case Format::Csv: out << io::to_csv(report); break;
    case Format::Json: out << json(report).dump(2) << '\n'; break;
    case Format::Pretty:
      out << "q                    " << report.q << "\n"
          << "k / m / a            " << io::join(spec.k()) << " / " << io::join(spec.m()) << " / "
          << io::join(spec.a()) << "\n"
          << "N                    " << report.count << "\n"
          << "main term            " << report.main_term.num << "/" << report.main_term.den << " = "
          << io::decimal(report.main_term.to_double()) << "\n"
          << "error                " << io::decimal(report.error) << "\n"
          << "ln|E| / ln q         "
          << (report.normalized_exponent ? io::decimal(*report.normalized_exponent) : "negligible (|E| < 1)")
          << "\n"
          << "theorem applicable   " << (report.theorem_applicable ? "yes" : "no (gcd(m_j, q) > 1)")
          << "\n";
      if (report.modulus_exceeded) out << "note                 some m_j >= q\n";
      break;
  }
  return kExitOk;
}

int cmd_expsum(const Options& o, std::ostream& out) {
  require_q(o);
  auto k = parse_vector(o.k, "--k");
  auto lambda = parse_vector(o.lambda, "--lambda");
  if (k.size() != lambda.size()) throw ValidationError("--k and --lambda must have equal lengths");
  for (i64 kj : k) {
    if (kj == 0) throw ValidationError("--k: k contains zero component; exponents must be nonzero");
  }
  require_budget(single_q_work(o.q, k.size()) * 2, o.work_budget);
  const ExpSumArgs args(Modulus(o.q), std::move(k), std::move(lambda));
  const auto report = make_expsum_report(args, o.jobs);
  switch (o.format) {
    case Format::Csv: out << io::to_csv(report); break;
    case Format::Json: out << json(report).dump(2) << '\n'; break;
    case Format::Pretty:
      out << "q            " << report.q << "\n"
          << "k / lambda   " << io::join(report.k) << " / " << io::join(report.lambda) << "\n"
          << "d            " << (report.d ? std::to_string(*report.d) : "undefined (all zero)") << "\n"
          << "direct       " << io::decimal(report.direct.re) << " + " << io::decimal(report.direct.im)
          << "i  |S| = " << io::decimal(report.direct.abs()) << "  (" << report.direct.terms
          << " terms)\n"
          << "crt          " << io::decimal(report.crt.re) << " + " << io::decimal(report.crt.im) << "i\n";
      if (report.lemma_ratio) out << "lemma ratio  " << io::decimal(*report.lemma_ratio) << "\n";
      break;
  }
  return kExitOk;
}

ScanOptions scan_options(const Options& o, std::ostream& err) {
  ScanOptions so;
  so.jobs = o.jobs;
  so.work_budget = o.work_budget;
  so.lemma_samples = o.samples;
  so.seed = o.seed;
  so.record_timing = o.timing;
  so.on_skip = [&err](u64 q) { err << "skip q=" << q << ": gcd with some m_j exceeds 1\n"; };
  return so;
}

void require_range(const Options& o) {
  if (o.q_min == 0 || o.q_max == 0) throw ValidationError("--q-min and --q-max are required");
  if (o.q_min > o.q_max) throw ValidationError("--q-min must not exceed --q-max");
}

void emit_scan(const Options& o, std::ostream& out, const std::vector<ScanRecord>& records,
               const ProblemSpec& spec, const RunMeta& meta) {
  switch (o.format) {
    case Format::Csv: out << io::to_csv(records); break;
    case Format::Json: out << io::scan_document(records, spec, meta).dump(2) << '\n'; break;
    case Format::Pretty:
      out << "q           N            main            error\n";
      for (const auto& r : records) {
        char line[128];
        std::snprintf(line, sizeof line, "%-11llu %-12llu %-15s %s\n",
                      static_cast<unsigned long long>(r.q), static_cast<unsigned long long>(r.count),
                      io::decimal(r.main).c_str(), io::decimal(r.error).c_str());
        out << line;
      }
      out << records.size() << " records\n";
      break;
  }
}

int cmd_parity(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto ks = o.k.empty() ? std::vector<i64>{1} : parse_vector(o.k, "--k");
  if (ks.size() != 1 || ks[0] == 0) throw ValidationError("--k: expected one nonzero integer");
  const i64 k = ks[0];
  if (o.q != 0) {
    if (o.q % 2 == 0) throw ValidationError("--q: parity report needs an odd modulus");
    require_budget(single_q_work(o.q, 2), o.work_budget);
    const auto report = parity_report(Modulus(o.q), k, o.jobs);
    switch (o.format) {
      case Format::Csv: out << io::to_csv(std::span<const ParityReport>(&report, 1)); break;
      case Format::Json: out << json(report).dump(2) << '\n'; break;
      case Format::Pretty:
        out << "q             " << report.q << "\n"
            << "k             " << report.k << "  (pairs n^k with n^-k)\n"
            << "both even     " << report.both_even << "\n"
            << "both odd      " << report.both_odd << "\n"
            << "same parity   " << report.same_parity << "\n"
            << "main          " << io::decimal(report.main_term.to_double()) << "\n"
            << "error         " << io::decimal(report.error) << "\n";
        break;
    }
    return kExitOk;
  }
  require_range(o);
  const Family family = o.family.empty() ? Family::Odd : parse_family(o.family);
  const auto records = parity_scan(family, o.q_min, o.q_max, k, scan_options(o, err));
  const ProblemSpec spec({k, -k}, {2, 2}, {0, 0});
  emit_scan(o, out, records, spec, meta_for(o, start));
  return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  require_range(o);
  const auto spec = spec_from(o);
  const Family family = o.family.empty() ? Family::Prime : parse_family(o.family);
  const auto records = scan_family(family, o.q_min, o.q_max, spec, scan_options(o, err));
  emit_scan(o, out, records, spec, meta_for(o, start));
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<ScanRecord> records;
  if (!o.in_path.empty()) {
    std::ifstream in(o.in_path);
    if (!in) throw ValidationError("--in: cannot open '" + o.in_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    records = io::parse_scan_csv(buffer.str());
  } else {
    require_range(o);
    const auto spec = spec_from(o);
    const Family family = o.family.empty() ? Family::Prime : parse_family(o.family);
    records = scan_family(family, o.q_min, o.q_max, spec, scan_options(o, err));
  }
  const auto fit = fit_exponent(records);
  switch (o.format) {
    case Format::Csv: out << io::to_csv(fit); break;
    case Format::Json: out << json(fit).dump(2) << '\n'; break;
    case Format::Pretty:
      out << "slope      " << io::decimal(fit.slope) << "\n"
          << "intercept  " << io::decimal(fit.intercept) << "\n"
          << "r^2        " << io::decimal(fit.r_squared) << "\n"
          << "points     " << fit.n_points << " (" << fit.filtered_zero_errors
          << " with |E| < 1 excluded)\n";
      break;
  }
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const bool none = !o.identities && !o.bounds && !o.weil;
  bool ok = true;
  json doc = json::object();
  if (o.identities || none) {
    const u64 l_max = o.l_max == 0 ? 200 : o.l_max;
    u64 passed = 0;
    for (u64 l = 1; l <= l_max; ++l) passed += orthogonality_check(l) ? 1 : 0;
    ok = ok && passed == l_max;
    doc["orthogonality"] = {{"passed", passed}, {"total", l_max}};
    if (o.format != Format::Json) {
      out << "orthogonality: " << passed << "/" << l_max << (passed == l_max ? " pass" : " FAIL") << "\n";
    }
  }
  if (o.bounds) {
    const u64 l_max = o.l_max == 0 ? 10'000 : o.l_max;
    if (l_max < 3) throw ValidationError("--l-max must be at least 3 for --bounds");
    const auto ls = geometric_grid(3, l_max, 1.5);
    const std::vector<double> fractions{0.0, 0.5, 1.0, 10.0};
    const auto rows = bound_ratio_sweep_scaled(ls, fractions, o.jobs);
    double r1 = 0.0, r2 = 0.0;
    for (const auto& r : rows) {
      r1 = std::max(r1, r.r1);
      r2 = std::max(r2, r.r2);
    }
    const bool pass = r1 <= 2.0 && r2 <= 3.0;
    ok = ok && pass;
    doc["geometric_bounds"] = {{"max_r1", r1}, {"max_r2", r2}, {"rows", rows.size()}, {"pass", pass}};
    if (o.format != Format::Json) {
      out << "geometric bounds: max r1 = " << io::decimal(r1) << " (cap 2), max r2 = " << io::decimal(r2)
          << " (cap 3)" << (pass ? " pass" : " FAIL") << "\n";
    }
  }
  if (o.weil) {
    const u64 q_max = o.q_max == 0 ? 2000 : o.q_max;
    const u64 pairs = o.samples == 0 ? 10 : o.samples;
    require_budget(estimate_scan_work(family_members(Family::Prime, 5, q_max), 2) * pairs, o.work_budget);
    u64 checked = 0, violations = 0;
    for (u64 p : family_members(Family::Prime, 5, q_max)) {
      const Modulus q(p);
      std::mt19937_64 rng(splitmix64(o.seed ^ splitmix64(p)));
      for (u64 t = 0; t < pairs; ++t) {
        const i64 a = uniform_int(rng, 1, static_cast<i64>(p) - 1);
        const i64 b = uniform_int(rng, 1, static_cast<i64>(p) - 1);
        const double magnitude = exp_sum_direct(ExpSumArgs(q, {1, -1}, {a, b}), o.jobs).abs();
        ++checked;
        if (magnitude > 2.0 * std::sqrt(static_cast<double>(p)) + 1e-6) ++violations;
      }
    }
    ok = ok && violations == 0;
    doc["weil"] = {{"checked", checked}, {"violations", violations}};
    if (o.format != Format::Json) {
      out << "weil: " << (checked - violations) << "/" << checked << (violations == 0 ? " pass" : " FAIL")
          << "\n";
    }
  }
  if (o.format == Format::Json) out << doc.dump(2) << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lehmer-lab: exact counts and exponential sums for the generalised Lehmer problem"};
  app.require_subcommand(1);
  app.footer(
      "Vector flags take comma-separated integers. Write negative entries with a leading minus\n"
      "and no space, e.g. --k 1,-1 or --k=-1,2.");
  Options o;

  const std::map<std::string, Format> formats{
      {"csv", Format::Csv}, {"json", Format::Json}, {"pretty", Format::Pretty}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv, json or pretty")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--jobs", o.jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out_path, "write data to this file instead of stdout");
    sub->add_option("--seed", o.seed, "random seed (default 0xC0FFEE)")->envname("LEHMER_LAB_SEED");
    sub->add_option("--work-budget", o.work_budget, "maximum estimated modular operations");
    sub->add_flag("--timing", o.timing, "record wall-clock seconds (output is then not reproducible)");
  };
  auto add_vectors = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "exponents, nonzero");
    sub->add_option("--m", o.m, "moduli m_j >= 1");
    sub->add_option("--a", o.a, "residues a_j (reduced mod m_j; default all zero)");
  };
  auto add_range = [&](CLI::App* sub) {
    sub->add_option("--q-min", o.q_min, "smallest modulus");
    sub->add_option("--q-max", o.q_max, "largest modulus");
    sub->add_option("--family", o.family, "prime, odd, all or prime-power");
  };

  auto* count = app.add_subcommand("count", "exact N_q(m, a; k) with main and error terms");
  add_common(count);
  add_vectors(count);
  count->add_option("--q", o.q, "modulus q >= 2");

  auto* expsum = app.add_subcommand("expsum", "evaluate the sparse exponential sum directly and via CRT");
  add_common(expsum);
  expsum->add_option("--q", o.q, "modulus q >= 2");
  expsum->add_option("--k", o.k, "exponents, nonzero");
  expsum->add_option("--lambda", o.lambda, "coefficients");

  auto* parity = app.add_subcommand("parity", "same-parity counts of n^k and n^-k for odd q");
  add_common(parity);
  add_range(parity);
  parity->add_option("--q", o.q, "single odd modulus");
  parity->add_option("--k", o.k, "exponent k (default 1)");

  auto* scan = app.add_subcommand("scan", "sweep a family of moduli");
  add_common(scan);
  add_vectors(scan);
  add_range(scan);
  scan->add_option("--samples", o.samples, "random lambda vectors per q for lemma_ratio_max");

  auto* fit = app.add_subcommand("fit", "least-squares exponent of ln|E| against ln q");
  add_common(fit);
  add_vectors(fit);
  add_range(fit);
  fit->add_option("--in", o.in_path, "fit an existing scan CSV instead of running a scan");

  auto* check = app.add_subcommand("check", "identity and bound checks");
  add_common(check);
  check->add_flag("--identities", o.identities, "orthogonality identity for l = 1..l-max");
  check->add_flag("--bounds", o.bounds, "geometric-sum bound ratios for l = 3..l-max");
  check->add_flag("--weil", o.weil, "Kloosterman sums against 2 sqrt(q) for primes up to --q-max");
  check->add_option("--l-max", o.l_max, "largest l");
  check->add_option("--q-max", o.q_max, "largest prime for --weil (default 2000)");
  check->add_option("--samples", o.samples, "(a, b) pairs per prime for --weil (default 10)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    Emitter emitter(o, out);
    auto& data = emitter.stream();
    if (count->parsed()) return cmd_count(o, data);
    if (expsum->parsed()) return cmd_expsum(o, data);
    if (parity->parsed()) return cmd_parity(o, data, err);
    if (scan->parsed()) return cmd_scan(o, data, err);
    if (fit->parsed()) return cmd_fit(o, data, err);
    if (check->parsed()) return cmd_check(o, data);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == Errc::RangeTooLarge ? kExitBudget : kExitValidation;
  }
  return kExitValidation;
}

}  // namespace lehmer::cli
