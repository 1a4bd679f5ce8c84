#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lehmer/ntcore.hpp"

namespace lehmer {

/// Nonnegative rational kept in lowest terms.
struct Rational {
  u64 num = 0;
  u64 den = 1;

  static Rational make(u128 num, u128 den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// One instance (k, m, a) of the counting problem; a is stored reduced mod m.
class ProblemSpec {
 public:
  ProblemSpec(std::vector<i64> k, std::vector<u64> m, std::vector<i64> a);

  std::size_t s() const { return k_.size(); }
  const std::vector<i64>& k() const { return k_; }
  const std::vector<u64>& m() const { return m_; }
  const std::vector<u64>& a() const { return a_; }

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

 private:
  std::vector<i64> k_;
  std::vector<u64> m_;
  std::vector<u64> a_;
};

struct CongruenceRecord {
  u64 r = 0;     // inverse of m_j modulo q
  u64 b = 0;     // a_j * r_j mod q
  i64 upper = 0; // U_j, largest U with m_j U + a_j < q (-1 when none exists)
};

/// The equivalent system r_j n^{k_j} == u_j + b_j (mod q), 0 <= u_j <= U_j.
/// Needs gcd(m_j, q) = 1 for every j.
class CongruenceSystem {
 public:
  CongruenceSystem(const Modulus& q, const ProblemSpec& spec);

  const std::vector<CongruenceRecord>& records() const { return records_; }

 private:
  std::vector<CongruenceRecord> records_;
};

struct CountReport {
  CountReport(u64 modulus, ProblemSpec problem) : q(modulus), spec(std::move(problem)) {}

  u64 q = 0;
  ProblemSpec spec;
  u64 count = 0;
  Rational main_term;
  double error = 0.0;                         // count - main_term
  std::optional<double> normalized_exponent;  // ln|E| / ln q, absent when |E| < 1
  bool theorem_applicable = true;             // gcd(m_j, q) = 1 for all j
  bool modulus_exceeded = false;              // some m_j >= q

  friend bool operator==(const CountReport&, const CountReport&) = default;
};

struct ParityReport {
  u64 q = 0;
  i64 k = 0;
  u64 both_even = 0;
  u64 both_odd = 0;
  u64 same_parity = 0;
  Rational main_term;
  double error = 0.0;

  friend bool operator==(const ParityReport&, const ParityReport&) = default;
};

struct UBounds {
  std::vector<i64> upper;
  /// |prod U_j - q^s / prod m_j|, exact.
  boost::multiprecision::cpp_rational deviation;
  /// s * q^{s-1}
  boost::multiprecision::cpp_int allowance;

  bool within_allowance() const { return deviation <= allowance; }
};

u64 count_direct(const Modulus& q, const ProblemSpec& spec, int jobs = 0);
u64 count_direct_serial(const Modulus& q, const ProblemSpec& spec);

/// N for every residue vector a at once; indexing as in kernels::count_cells.
std::vector<u64> count_all_cells(const Modulus& q, const std::vector<i64>& k,
                                 const std::vector<u64>& m, int jobs = 0);

u64 count_via_congruence_system(const Modulus& q, const ProblemSpec& spec);

Rational main_term(const Modulus& q, const ProblemSpec& spec);

UBounds u_bounds(const Modulus& q, const ProblemSpec& spec);

/// Same-parity count of n^k and n^{-k} for odd q.
ParityReport parity_report(const Modulus& q, i64 k, int jobs = 0);

CountReport count_report(const Modulus& q, const ProblemSpec& spec, int jobs = 0);

/// Signed N - main as a double, computed from exact integers.
double signed_error(u64 count, const Rational& main);

}  // namespace lehmer
