#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lehmer {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Largest modulus accepted by factor() and Modulus.
inline constexpr u64 kMaxModulus = u64{1} << 62;

/// Default cap on |k| for pow_mod_signed.
inline constexpr i64 kMaxExponent = i64{1} << 20;

struct PrimePower {
  u64 prime = 0;
  int exponent = 0;

  u64 value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// An integer q >= 2 together with its factorization. Immutable once built.
class Modulus {
 public:
  explicit Modulus(u64 q);

  u64 q() const { return q_; }
  std::span<const PrimePower> factors() const { return factors_; }
  u64 phi() const { return phi_; }
  u64 divisor_count() const { return divisor_count_; }
  /// Number of distinct prime divisors.
  std::size_t nu() const { return factors_.size(); }
  bool is_prime() const { return factors_.size() == 1 && factors_[0].exponent == 1; }

  friend bool operator==(const Modulus& lhs, const Modulus& rhs) { return lhs.q_ == rhs.q_; }

 private:
  u64 q_;
  std::vector<PrimePower> factors_;
  u64 phi_ = 1;
  u64 divisor_count_ = 1;
};

struct CrtComponent {
  u64 prime_power = 0;  // P_i = p_i^{alpha_i}
  u64 cofactor = 0;     // q / P_i
  u64 inverse = 0;      // t_i, with t_i * cofactor == 1 (mod P_i), 0 <= t_i < P_i
};

class CrtPlan {
 public:
  CrtPlan(Modulus parent, std::vector<CrtComponent> components)
      : parent_(std::move(parent)), components_(std::move(components)) {}

  const Modulus& parent() const { return parent_; }
  std::span<const CrtComponent> components() const { return components_; }

 private:
  Modulus parent_;
  std::vector<CrtComponent> components_;
};

u64 gcd(u64 a, u64 b);
u64 mul_mod(u64 a, u64 b, u64 q);
u64 pow_mod(u64 base, u64 exponent, u64 q);

/// Least nonnegative residue of x modulo q.
u64 reduce(i64 x, u64 q);
/// Representative of x modulo q in the symmetric range (-(q-1)/2, q/2].
i64 reduce_symmetric(i64 x, u64 q);

/// Deterministic Miller-Rabin, exact for all 64-bit n.
bool is_prime(u64 n);

/// Prime factorization, primes ascending. Requires 2 <= n <= 2^62.
std::vector<PrimePower> factor(u64 n);

u64 euler_phi(const Modulus& m);

/// The x in [1, q) with n*x == 1 (mod q). Throws NotInvertible.
u64 mod_inverse(i64 n, u64 q);

/// n^k mod q for k > 0, (n^{-1})^{|k|} mod q for k < 0.
u64 pow_mod_signed(i64 n, i64 k, u64 q, i64 max_abs_exponent = kMaxExponent);

CrtPlan build_crt_plan(const Modulus& m);

std::vector<u64> divisors(const Modulus& m);

}  // namespace lehmer
