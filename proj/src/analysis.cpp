#include "lehmer/analysis.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "lehmer/compensated.hpp"
#include "lehmer/error.hpp"
#include "lehmer/expsum.hpp"
#include "lehmer/kernels.hpp"

namespace lehmer {

namespace {

using Clock = std::chrono::steady_clock;

// Runs body(i) for i in [0, count) and rethrows the first exception raised
// inside the parallel region.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(lehmer_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Splits the thread budget between the q loop and the kernel inside it.
struct JobSplit {
  int outer;
  int inner;
};

JobSplit split_jobs(std::size_t tasks, int jobs) {
  const int threads = kernels::resolve_jobs(jobs);
  if (tasks >= static_cast<std::size_t>(threads) * 4) return {threads, 1};
  return {1, threads};
}

std::vector<i64> random_coefficients(std::mt19937_64& rng, u64 q, std::size_t s) {
  const i64 lo = -static_cast<i64>((q - 1) / 2);
  const i64 hi = static_cast<i64>(q / 2);
  std::vector<i64> lambda(s);
  bool nonzero = false;
  while (!nonzero) {
    for (auto& v : lambda) {
      v = uniform_int(rng, lo, hi);
      nonzero = nonzero || v != 0;
    }
  }
  return lambda;
}

std::mt19937_64 stream_for(u64 seed, u64 q) { return std::mt19937_64(splitmix64(seed ^ splitmix64(q))); }

void check_budget(u64 work, u64 budget) {
  if (work > budget) {
    throw Error(Errc::RangeTooLarge, "estimated work " + std::to_string(work) +
                                         " modular operations exceeds budget " +
                                         std::to_string(budget));
  }
}

u64 saturating_add(u64 a, u64 b) {
  return a > std::numeric_limits<u64>::max() - b ? std::numeric_limits<u64>::max() : a + b;
}

u64 saturating_mul(u64 a, u64 b) {
  return b != 0 && a > std::numeric_limits<u64>::max() / b ? std::numeric_limits<u64>::max() : a * b;
}

void check_range(u64 q_min, u64 q_max) {
  if (q_min < 2 || q_max > 10'000'000) {
    throw Error(Errc::InvalidArgument, "scan range must satisfy 2 <= q_min and q_max <= 10^7");
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Prime: return "prime";
    case Family::Odd: return "odd";
    case Family::All: return "all";
    case Family::PrimePower: return "prime-power";
  }
  return "all";
}

Family parse_family(std::string_view text) {
  if (text == "prime") return Family::Prime;
  if (text == "odd") return Family::Odd;
  if (text == "all") return Family::All;
  if (text == "prime-power" || text == "prime_power") return Family::PrimePower;
  throw Error(Errc::InvalidArgument, "unknown family '" + std::string(text) +
                                         "' (expected prime, odd, all or prime-power)");
}

std::vector<u64> family_members(Family family, u64 q_min, u64 q_max) {
  std::vector<u64> out;
  if (q_min > q_max) return out;
  q_min = std::max<u64>(q_min, 2);
  if (family == Family::All || family == Family::Odd) {
    for (u64 q = q_min; q <= q_max; ++q) {
      if (family == Family::All || q % 2 == 1) out.push_back(q);
    }
    return out;
  }
  // Sieve primes up to q_max, then lift to powers when asked.
  std::vector<bool> composite(q_max + 1, false);
  std::vector<bool> keep(q_max + 1, false);
  for (u64 p = 2; p <= q_max; ++p) {
    if (composite[p]) continue;
    for (u64 j = p * p; j <= q_max; j += p) composite[j] = true;
    keep[p] = true;
    if (family == Family::PrimePower) {
      for (u64 pp = p; pp <= q_max / p;) {
        pp *= p;
        keep[pp] = true;
      }
    }
  }
  for (u64 q = q_min; q <= q_max; ++q) {
    if (keep[q]) out.push_back(q);
  }
  return out;
}

u64 estimate_scan_work(std::span<const u64> members, std::size_t s) {
  u64 total = 0;
  for (u64 q : members) total = saturating_add(total, saturating_mul(q, s));
  return total;
}

std::vector<ScanRecord> scan_family(Family family, u64 q_min, u64 q_max, const ProblemSpec& spec,
                                    const ScanOptions& options) {
  check_range(q_min, q_max);
  if (options.lemma_samples > 0 && spec.s() < 2) {
    throw Error(Errc::InvalidArgument, "lemma ratio sampling needs s >= 2");
  }
  std::vector<u64> members;
  for (u64 q : family_members(family, q_min, q_max)) {
    bool coprime = true;
    for (u64 mj : spec.m()) coprime = coprime && gcd(mj, q) == 1;
    if (options.theorem_check && !coprime) {
      if (options.on_skip) options.on_skip(q);
      continue;
    }
    members.push_back(q);
  }
  const u64 work = estimate_scan_work(members, spec.s());
  check_budget(saturating_mul(work, 1 + options.lemma_samples), options.work_budget);

  std::vector<ScanRecord> records(members.size());
  const auto jobs = split_jobs(members.size(), options.jobs);
  parallel_for(members.size(), jobs.outer, [&](std::size_t i) {
    const auto start = Clock::now();
    const Modulus q(members[i]);
    ScanRecord& rec = records[i];
    rec.q = q.q();
    rec.family = family;
    rec.phi = q.phi();
    rec.count = count_direct(q, spec, jobs.inner);
    const Rational main = main_term(q, spec);
    rec.main = main.to_double();
    rec.error = signed_error(rec.count, main);
    rec.abs_error = std::abs(rec.error);
    if (options.lemma_samples > 0) {
      auto rng = stream_for(options.seed, q.q());
      double worst = 0.0;
      for (u64 t = 0; t < options.lemma_samples; ++t) {
        const ExpSumArgs args(q, spec.k(), random_coefficients(rng, q.q(), spec.s()));
        worst = std::max(worst, lemma_ratio(args, jobs.inner));
      }
      rec.lemma_ratio_max = worst;
    }
    if (options.record_timing) {
      rec.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    }
  });
  return records;
}

std::vector<ScanRecord> parity_scan(Family family, u64 q_min, u64 q_max, i64 k,
                                    const ScanOptions& options) {
  check_range(q_min, q_max);
  if (k == 0) throw Error(Errc::ZeroExponent, "k must be nonzero");
  std::vector<u64> members;
  for (u64 q : family_members(family, q_min, q_max)) {
    if (q % 2 == 0) {
      if (options.on_skip) options.on_skip(q);
      continue;
    }
    members.push_back(q);
  }
  check_budget(estimate_scan_work(members, 2), options.work_budget);

  std::vector<ScanRecord> records(members.size());
  const auto jobs = split_jobs(members.size(), options.jobs);
  parallel_for(members.size(), jobs.outer, [&](std::size_t i) {
    const auto start = Clock::now();
    const Modulus q(members[i]);
    const ParityReport report = parity_report(q, k, jobs.inner);
    ScanRecord& rec = records[i];
    rec.q = q.q();
    rec.family = family;
    rec.phi = q.phi();
    rec.count = report.same_parity;
    rec.main = report.main_term.to_double();
    rec.error = report.error;
    rec.abs_error = std::abs(report.error);
    if (options.record_timing) {
      rec.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    }
  });
  return records;
}

ExponentFit fit_exponent(std::span<const ScanRecord> records) {
  ExponentFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : records) {
    if (r.abs_error < 1.0) {
      ++fit.filtered_zero_errors;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(r.q)));
    ys.push_back(std::log(r.abs_error));
  }
  fit.n_points = xs.size();
  if (fit.n_points < 5) {
    throw Error(Errc::InsufficientData, "exponent fit needs at least 5 points with |E| >= 1, have " +
                                            std::to_string(fit.n_points));
  }
  const double n = static_cast<double>(fit.n_points);
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() == 0.0) {
    throw Error(Errc::InsufficientData, "exponent fit needs at least two distinct q");
  }
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy.value() == 0.0 ? 1.0 : sxy.value() * sxy.value() / (sxx.value() * syy.value());
  return fit;
}

std::complex<double> orthogonality_detector(u64 l, i64 u) {
  if (l == 0) throw Error(Errc::InvalidArgument, "orthogonality needs l >= 1");
  const i64 lo = -static_cast<i64>((l - 1) / 2);
  const i64 hi = static_cast<i64>(l / 2);
  const u64 ur = reduce(u, l);
  CompensatedComplexSum acc;
  for (i64 mu = lo; mu <= hi; ++mu) {
    const u64 z = static_cast<u64>(static_cast<u128>(reduce(mu, l)) * ur % l);
    const auto term = kernels::unit_phase(z, l);
    acc.add(term.real(), term.imag());
  }
  return acc.value() / static_cast<double>(l);
}

bool orthogonality_check(u64 l) {
  for (u64 u = 0; u < l; ++u) {
    const double expected = u == 0 ? 1.0 : 0.0;
    const auto value = orthogonality_detector(l, static_cast<i64>(u));
    if (std::abs(value.real() - expected) > 1e-9 || std::abs(value.imag()) > 1e-9) return false;
  }
  return true;
}

std::vector<LemmaRatioRow> lemma_ratio_sweep(std::span<const Modulus> moduli,
                                             std::span<const i64> k, u64 samples_per_q,
                                             u64 seed, int jobs) {
  if (k.size() < 2) throw Error(Errc::InvalidArgument, "lemma ratio sweep needs s >= 2");
  if (samples_per_q < 1) throw Error(Errc::InvalidArgument, "samples per q must be at least 1");
  std::vector<LemmaRatioRow> rows(moduli.size());
  const std::vector<i64> exponents(k.begin(), k.end());
  const auto split = split_jobs(moduli.size(), jobs);
  parallel_for(moduli.size(), split.outer, [&](std::size_t i) {
    const Modulus& q = moduli[i];
    auto rng = stream_for(seed, q.q());
    CompensatedSum total;
    double worst = 0.0;
    for (u64 t = 0; t < samples_per_q; ++t) {
      const ExpSumArgs args(q, exponents, random_coefficients(rng, q.q(), exponents.size()));
      const double ratio = lemma_ratio(args, split.inner);
      worst = std::max(worst, ratio);
      total.add(ratio);
    }
    rows[i] = {q.q(), samples_per_q, worst, total.value() / static_cast<double>(samples_per_q)};
  });
  return rows;
}

std::vector<BoundRatioRow> bound_ratio_sweep(std::span<const u64> l_values,
                                             std::span<const u64> upper_values, int jobs) {
  std::vector<BoundRatioRow> rows;
  for (u64 l : l_values) {
    for (u64 upper : upper_values) rows.push_back({l, upper, 0.0, 0.0});
  }
  parallel_for(rows.size(), kernels::resolve_jobs(jobs), [&](std::size_t i) {
    const auto r = geometric_bound_ratios(rows[i].l, rows[i].upper);
    rows[i].r1 = r.r1;
    rows[i].r2 = r.r2;
  });
  return rows;
}

std::vector<BoundRatioRow> bound_ratio_sweep_scaled(std::span<const u64> l_values,
                                                    std::span<const double> fractions, int jobs) {
  std::vector<BoundRatioRow> rows;
  for (u64 l : l_values) {
    for (double f : fractions) {
      rows.push_back({l, static_cast<u64>(std::floor(f * static_cast<double>(l))), 0.0, 0.0});
    }
  }
  parallel_for(rows.size(), kernels::resolve_jobs(jobs), [&](std::size_t i) {
    const auto r = geometric_bound_ratios(rows[i].l, rows[i].upper);
    rows[i].r1 = r.r1;
    rows[i].r2 = r.r2;
  });
  return rows;
}

std::vector<u64> geometric_grid(u64 lo, u64 hi, double ratio) {
  if (!(ratio > 1.0)) throw Error(Errc::InvalidArgument, "grid ratio must exceed 1");
  std::vector<u64> out;
  if (lo > hi) return out;
  for (double x = static_cast<double>(lo); x < static_cast<double>(hi); x *= ratio) {
    const u64 v = static_cast<u64>(std::llround(x));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  if (out.empty() || out.back() != hi) out.push_back(hi);
  return out;
}

}  // namespace lehmer
