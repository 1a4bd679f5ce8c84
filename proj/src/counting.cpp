#include "lehmer/counting.hpp"

#include <cmath>
#include <string>

#include "lehmer/error.hpp"
#include "lehmer/kernels.hpp"

namespace lehmer {

namespace {

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

u128 product_of(const std::vector<u64>& m) {
  u128 p = 1;
  for (u64 v : m) {
    if (p > ~u128{0} / v) throw Error(Errc::Overflow, "product of m_j overflows 128 bits");
    p *= v;
  }
  return p;
}

}  // namespace

Rational Rational::make(u128 num, u128 den) {
  if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator");
  const u128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (num > ~u64{0} || den > ~u64{0}) {
    throw Error(Errc::Overflow, "rational does not fit in 64-bit numerator/denominator");
  }
  return {static_cast<u64>(num), static_cast<u64>(den)};
}

ProblemSpec::ProblemSpec(std::vector<i64> k, std::vector<u64> m, std::vector<i64> a)
    : k_(std::move(k)), m_(std::move(m)) {
  if (k_.empty()) throw Error(Errc::InvalidArgument, "dimension s must be at least 1");
  if (k_.size() != m_.size() || k_.size() != a.size()) {
    throw Error(Errc::InvalidArgument, "vector lengths differ: k has " + std::to_string(k_.size()) +
                                           ", m has " + std::to_string(m_.size()) + ", a has " +
                                           std::to_string(a.size()));
  }
  for (i64 kj : k_) {
    if (kj == 0) {
      throw Error(Errc::ZeroExponent,
                  "k contains zero component; exponents must be nonzero");
    }
    if (kj > kMaxExponent || kj < -kMaxExponent) {
      throw Error(Errc::ExponentOutOfRange, "exponent " + std::to_string(kj) + " exceeds cap");
    }
  }
  a_.reserve(a.size());
  for (std::size_t j = 0; j < m_.size(); ++j) {
    if (m_[j] < 1) throw Error(Errc::InvalidArgument, "m_j must be at least 1");
    a_.push_back(reduce(a[j], m_[j]));
  }
}

CongruenceSystem::CongruenceSystem(const Modulus& q, const ProblemSpec& spec) {
  const u64 modulus = q.q();
  for (std::size_t j = 0; j < spec.s(); ++j) {
    const u64 mj = spec.m()[j];
    const u64 aj = spec.a()[j];
    if (gcd(mj % modulus, modulus) != 1) {
      throw Error(Errc::CoprimalityViolation, "gcd(m_" + std::to_string(j + 1) + "=" +
                                                  std::to_string(mj) + ", q=" +
                                                  std::to_string(modulus) + ") > 1");
    }
    CongruenceRecord rec;
    rec.r = mod_inverse(static_cast<i64>(mj % modulus), modulus);
    rec.b = mul_mod(aj % modulus, rec.r, modulus);
    rec.upper = aj >= modulus ? -1 : static_cast<i64>((modulus - 1 - aj) / mj);
    records_.push_back(rec);
  }
}

u64 count_direct(const Modulus& q, const ProblemSpec& spec, int jobs) {
  return kernels::count_matching(q, spec.k(), spec.m(), spec.a(), jobs);
}

u64 count_direct_serial(const Modulus& q, const ProblemSpec& spec) {
  return kernels::serial::count_matching(q, spec.k(), spec.m(), spec.a());
}

std::vector<u64> count_all_cells(const Modulus& q, const std::vector<i64>& k,
                                 const std::vector<u64>& m, int jobs) {
  for (i64 kj : k) {
    if (kj == 0) throw Error(Errc::ZeroExponent, "k contains zero component; exponents must be nonzero");
  }
  return kernels::count_cells(q, k, m, jobs);
}

u64 count_via_congruence_system(const Modulus& q, const ProblemSpec& spec) {
  const CongruenceSystem system(q, spec);
  const u64 modulus = q.q();
  const auto& records = system.records();
  u64 count = 0;
  for (u64 n = 1; n < modulus; ++n) {
    if (gcd(n, modulus) != 1) continue;
    bool solvable = true;
    for (std::size_t j = 0; j < spec.s() && solvable; ++j) {
      const u64 power = pow_mod_signed(static_cast<i64>(n), spec.k()[j], modulus);
      const u64 lhs = mul_mod(records[j].r, power, modulus);
      const u64 u = (lhs + modulus - records[j].b) % modulus;
      solvable = records[j].upper >= 0 && u <= static_cast<u64>(records[j].upper);
    }
    if (solvable) ++count;
  }
  return count;
}

Rational main_term(const Modulus& q, const ProblemSpec& spec) {
  return Rational::make(q.phi(), product_of(spec.m()));
}

double signed_error(u64 count, const Rational& main) {
  const __int128 scaled = static_cast<__int128>(static_cast<u128>(count) * main.den) -
                          static_cast<__int128>(main.num);
  return static_cast<double>(scaled) / static_cast<double>(main.den);
}

UBounds u_bounds(const Modulus& q, const ProblemSpec& spec) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  const u64 modulus = q.q();
  UBounds out;
  cpp_int prod_u = 1;
  cpp_int prod_m = 1;
  for (std::size_t j = 0; j < spec.s(); ++j) {
    const u64 mj = spec.m()[j];
    const u64 aj = spec.a()[j];
    const i64 upper = aj >= modulus ? -1 : static_cast<i64>((modulus - 1 - aj) / mj);
    out.upper.push_back(upper);
    prod_u *= upper;
    prod_m *= mj;
  }
  const cpp_int q_pow_s = boost::multiprecision::pow(cpp_int(modulus), static_cast<unsigned>(spec.s()));
  out.deviation = abs(cpp_rational(prod_u) - cpp_rational(q_pow_s, prod_m));
  out.allowance = cpp_int(spec.s()) *
                  boost::multiprecision::pow(cpp_int(modulus), static_cast<unsigned>(spec.s() - 1));
  return out;
}

ParityReport parity_report(const Modulus& q, i64 k, int jobs) {
  if (q.q() % 2 == 0) {
    throw Error(Errc::EvenModulus, "parity report needs odd q, got " + std::to_string(q.q()));
  }
  if (k == 0) throw Error(Errc::ZeroExponent, "k must be nonzero");
  const std::vector<i64> exponents{k, -k};
  const std::vector<u64> moduli{2, 2};
  const auto cells = count_all_cells(q, exponents, moduli, jobs);
  ParityReport r;
  r.q = q.q();
  r.k = k;
  r.both_even = cells[0];
  r.both_odd = cells[3];
  r.same_parity = r.both_even + r.both_odd;
  r.main_term = Rational::make(q.phi(), 2);
  r.error = signed_error(r.same_parity, r.main_term);
  return r;
}

CountReport count_report(const Modulus& q, const ProblemSpec& spec, int jobs) {
  CountReport r(q.q(), spec);
  r.count = count_direct(q, spec, jobs);
  r.main_term = main_term(q, spec);
  r.error = signed_error(r.count, r.main_term);
  if (std::abs(r.error) >= 1.0) {
    r.normalized_exponent = std::log(std::abs(r.error)) / std::log(static_cast<double>(q.q()));
  }
  for (u64 mj : spec.m()) {
    if (gcd(mj % q.q(), q.q()) != 1) r.theorem_applicable = false;
    if (mj >= q.q()) r.modulus_exceeded = true;
  }
  return r;
}

}  // namespace lehmer
