#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lehmer/counting.hpp"
#include "lehmer/ntcore.hpp"
#include "lehmer/random.hpp"

namespace lehmer {

enum class Family { Prime, Odd, All, PrimePower };

std::string_view to_string(Family family);
/// Accepts "prime", "odd", "all", "prime-power" and "prime_power".
Family parse_family(std::string_view text);

/// Members of the family in [q_min, q_max], ascending. Prime powers include
/// the primes themselves (exponent 1).
std::vector<u64> family_members(Family family, u64 q_min, u64 q_max);

struct ScanRecord {
  u64 q = 0;
  Family family = Family::All;
  u64 phi = 0;
  u64 count = 0;
  double main = 0.0;
  double error = 0.0;
  double abs_error = 0.0;
  std::optional<double> lemma_ratio_max;
  double wall_time = 0.0;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

inline constexpr u64 kDefaultWorkBudget = 10'000'000'000ULL;

struct ScanOptions {
  int jobs = 0;
  u64 work_budget = kDefaultWorkBudget;
  /// Random lambda vectors per q for lemma_ratio_max; 0 leaves it empty.
  u64 lemma_samples = 0;
  u64 seed = kDefaultSeed;
  /// Skip q sharing a factor with some m_j.
  bool theorem_check = true;
  /// Fill wall_time. Off keeps output byte-reproducible.
  bool record_timing = false;
  std::function<void(u64 q)> on_skip;
};

/// Estimated modular operations for enumerating every member: sum of s * q.
u64 estimate_scan_work(std::span<const u64> members, std::size_t s);

std::vector<ScanRecord> scan_family(Family family, u64 q_min, u64 q_max, const ProblemSpec& spec,
                                    const ScanOptions& options = {});

/// Same-parity counts of (n^k, n^{-k}) over the odd members of a family;
/// count is same_parity and main is phi(q)/2.
std::vector<ScanRecord> parity_scan(Family family, u64 q_min, u64 q_max, i64 k,
                                    const ScanOptions& options = {});

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  std::size_t filtered_zero_errors = 0;

  friend bool operator==(const ExponentFit&, const ExponentFit&) = default;
};

/// Least squares of ln|E| on ln q; points with |E| < 1 are dropped and counted.
ExponentFit fit_exponent(std::span<const ScanRecord> records);

/// (1/l) sum over the symmetric range of e_l(mu u).
std::complex<double> orthogonality_detector(u64 l, i64 u);
bool orthogonality_check(u64 l);

struct LemmaRatioRow {
  u64 q = 0;
  u64 samples = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;

  friend bool operator==(const LemmaRatioRow&, const LemmaRatioRow&) = default;
};

std::vector<LemmaRatioRow> lemma_ratio_sweep(std::span<const Modulus> moduli,
                                             std::span<const i64> k, u64 samples_per_q,
                                             u64 seed, int jobs = 0);

struct BoundRatioRow {
  u64 l = 0;
  u64 upper = 0;
  double r1 = 0.0;
  double r2 = 0.0;

  friend bool operator==(const BoundRatioRow&, const BoundRatioRow&) = default;
};

/// Every (l, U) pair of the two lists.
std::vector<BoundRatioRow> bound_ratio_sweep(std::span<const u64> l_values,
                                             std::span<const u64> upper_values, int jobs = 0);

/// U scaled to each l: U = floor(f * l) for every fraction f.
std::vector<BoundRatioRow> bound_ratio_sweep_scaled(std::span<const u64> l_values,
                                                    std::span<const double> fractions,
                                                    int jobs = 0);

/// Roughly geometric grid from lo to hi (inclusive) with the given ratio.
std::vector<u64> geometric_grid(u64 lo, u64 hi, double ratio);

}  // namespace lehmer
