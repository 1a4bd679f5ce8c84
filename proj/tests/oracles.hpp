#pragma once

// Brute-force reference computations for tests. Deliberately naive: nothing
// here calls into the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline std::vector<std::pair<u64, int>> trial_division(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

inline u64 phi(u64 q) {
  u64 c = 0;
  for (u64 n = 1; n < q; ++n) c += std::gcd(n, q) == 1;
  return c;
}

/// Inverse by exhaustive search; small q only.
inline u64 inverse(u64 n, u64 q) {
  n %= q;
  for (u64 x = 1; x < q; ++x) {
    if (n * x % q == 1) return x;
  }
  return 0;
}

/// n^k mod q by repeated multiplication; small q and |k| only.
inline u64 power(u64 n, i64 k, u64 q) {
  const u64 base = k > 0 ? n % q : inverse(n, q);
  u64 r = 1 % q;
  for (i64 i = 0; i < (k > 0 ? k : -k); ++i) r = r * base % q;
  return r;
}

inline std::complex<long double> exp_sum(u64 q, const std::vector<i64>& k, const std::vector<i64>& lambda) {
  std::complex<long double> total = 0;
  for (u64 n = 1; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    i64 z = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      z += lambda[j] * static_cast<i64>(power(n, k[j], q));
      z %= static_cast<i64>(q);
    }
    const long double theta = 2.0L * std::numbers::pi_v<long double> * z / q;
    total += std::complex<long double>(std::cos(theta), std::sin(theta));
  }
  return total;
}

inline u64 count(u64 q, const std::vector<i64>& k, const std::vector<u64>& m, const std::vector<u64>& a) {
  u64 c = 0;
  for (u64 n = 1; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    bool ok = true;
    for (std::size_t j = 0; j < k.size(); ++j) ok = ok && power(n, k[j], q) % m[j] == a[j];
    c += ok;
  }
  return c;
}

inline std::complex<long double> geometric_sum(u64 l, i64 mu, u64 upper) {
  std::complex<long double> total = 0;
  for (u64 u = 0; u <= upper; ++u) {
    const long double theta = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(mu) *
                              static_cast<long double>(u) / static_cast<long double>(l);
    total += std::complex<long double>(std::cos(theta), std::sin(theta));
  }
  return total;
}

}  // namespace oracle
