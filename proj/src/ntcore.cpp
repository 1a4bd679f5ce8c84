#include "lehmer/ntcore.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <string>

#include "lehmer/error.hpp"

namespace lehmer {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidModulus: return "InvalidModulus";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::ZeroExponent: return "ZeroExponent";
    case Errc::ExponentOutOfRange: return "ExponentOutOfRange";
    case Errc::PlanMismatch: return "PlanMismatch";
    case Errc::AllZeroCoefficients: return "AllZeroCoefficients";
    case Errc::CoprimalityViolation: return "CoprimalityViolation";
    case Errc::EvenModulus: return "EvenModulus";
    case Errc::RangeTooLarge: return "RangeTooLarge";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::Overflow: return "Overflow";
  }
  return "Unknown";
}

namespace {

constexpr u64 kTrialDivisionBound = 1'000'000;

const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = [] {
    std::vector<bool> composite(kTrialDivisionBound + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= kTrialDivisionBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (u64 j = i * i; j <= kTrialDivisionBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int r) {
  a %= n;
  if (a == 0) return false;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

// Brent's variant of Pollard rho. Returns a nontrivial divisor of the odd
// composite n.
u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    constexpr u64 kBatch = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_large(d, primes);
  factor_large(n / d, primes);
}

}  // namespace

u64 PrimePower::value() const {
  u64 v = 1;
  for (int i = 0; i < exponent; ++i) v *= prime;
  return v;
}

Modulus::Modulus(u64 q) : q_(q), factors_(factor(q)) {
  for (const auto& f : factors_) {
    phi_ *= f.value() / f.prime * (f.prime - 1);
    divisor_count_ *= static_cast<u64>(f.exponent + 1);
  }
}

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

u64 mul_mod(u64 a, u64 b, u64 q) {
  return static_cast<u64>(static_cast<u128>(a) * b % q);
}

u64 pow_mod(u64 base, u64 exponent, u64 q) {
  u64 result = 1 % q;
  base %= q;
  while (exponent != 0) {
    if (exponent & 1) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exponent >>= 1;
  }
  return result;
}

u64 reduce(i64 x, u64 q) {
  if (x >= 0) return static_cast<u64>(x) % q;
  // -(x+1) avoids overflow on INT64_MIN.
  const u64 r = static_cast<u64>(-(x + 1)) % q;
  return q - 1 - r;
}

i64 reduce_symmetric(i64 x, u64 q) {
  const u64 r = reduce(x, q);
  return r > q / 2 ? static_cast<i64>(r) - static_cast<i64>(q) : static_cast<i64>(r);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  const u64 d = (n - 1) >> std::countr_zero(n - 1);
  const int r = std::countr_zero(n - 1);
  // This witness set is exact for n < 3.3e24.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

std::vector<PrimePower> factor(u64 n) {
  if (n < 2 || n > kMaxModulus) {
    throw Error(Errc::InvalidModulus,
                "modulus " + std::to_string(n) + " outside [2, 2^62]");
  }
  std::vector<PrimePower> out;
  for (u64 p : small_primes()) {
    if (p * p > n) break;
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n == 1) return out;

  std::vector<u64> rest;
  if (n <= kTrialDivisionBound * kTrialDivisionBound) {
    rest.push_back(n);  // no factor below 10^6, so n itself is prime
  } else {
    factor_large(n, rest);
  }
  std::sort(rest.begin(), rest.end());
  for (u64 p : rest) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

u64 euler_phi(const Modulus& m) { return m.phi(); }

u64 mod_inverse(i64 n, u64 q) {
  if (q < 2) throw Error(Errc::InvalidModulus, "modular inverse needs q >= 2");
  const u64 a = reduce(n, q);
  // Extended Euclid on (a, q) with signed 128-bit coefficients.
  __int128 old_r = a, r = q, old_s = 1, s = 0;
  while (r != 0) {
    const __int128 quot = old_r / r;
    std::swap(old_r, r);
    r -= quot * old_r;
    std::swap(old_s, s);
    s -= quot * old_s;
  }
  if (old_r != 1) {
    throw Error(Errc::NotInvertible, std::to_string(n) + " is not invertible modulo " +
                                         std::to_string(q));
  }
  __int128 x = old_s % static_cast<__int128>(q);
  if (x < 0) x += q;
  return static_cast<u64>(x);
}

u64 pow_mod_signed(i64 n, i64 k, u64 q, i64 max_abs_exponent) {
  if (k == 0) {
    throw Error(Errc::ZeroExponent, "exponent must be nonzero");
  }
  if (k > max_abs_exponent || k < -max_abs_exponent) {
    throw Error(Errc::ExponentOutOfRange,
                "|k| = " + std::to_string(k < 0 ? -k : k) + " exceeds the exponent cap " +
                    std::to_string(max_abs_exponent));
  }
  const u64 base = k > 0 ? reduce(n, q) : mod_inverse(n, q);
  if (k > 0 && gcd(base, q) != 1) {
    throw Error(Errc::NotInvertible, std::to_string(n) + " is not a unit modulo " +
                                         std::to_string(q));
  }
  return pow_mod(base, static_cast<u64>(k > 0 ? k : -k), q);
}

CrtPlan build_crt_plan(const Modulus& m) {
  std::vector<CrtComponent> components;
  components.reserve(m.nu());
  for (const auto& f : m.factors()) {
    const u64 prime_power = f.value();
    const u64 cofactor = m.q() / prime_power;
    // A single-prime modulus has cofactor 1, whose inverse is taken to be 1.
    const u64 inverse = cofactor == 1 ? 1 : mod_inverse(static_cast<i64>(cofactor % prime_power),
                                                        prime_power);
    components.push_back({prime_power, cofactor, inverse});
  }
  return CrtPlan(m, std::move(components));
}

std::vector<u64> divisors(const Modulus& m) {
  std::vector<u64> out{1};
  out.reserve(m.divisor_count());
  for (const auto& f : m.factors()) {
    const std::size_t base = out.size();
    u64 power = 1;
    for (int e = 1; e <= f.exponent; ++e) {
      power *= f.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lehmer
