#pragma once

#include <cstdint>

namespace lehmer::detail {

/// Barrett reduction for moduli below 2^32: products fit in 64 bits and the
/// quotient estimate is off by at most two.
class BarrettMul {
 public:
  explicit BarrettMul(std::uint64_t q) : q_(q), m_(~std::uint64_t{0} / q) {}

  std::uint64_t modulus() const { return q_; }

  std::uint64_t reduce(std::uint64_t x) const {
    const auto est = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * m_) >> 64);
    std::uint64_t r = x - est * q_;
    while (r >= q_) r -= q_;
    return r;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(a * b); }

 private:
  std::uint64_t q_;
  std::uint64_t m_;
};

/// 128-bit widened product for moduli up to 2^62.
class WideMul {
 public:
  explicit WideMul(std::uint64_t q) : q_(q) {}

  std::uint64_t modulus() const { return q_; }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q_);
  }

 private:
  std::uint64_t q_;
};

template <class Mul>
std::uint64_t pow(const Mul& mul, std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  while (exponent != 0) {
    if (exponent & 1) result = mul.mul(result, base);
    exponent >>= 1;
    if (exponent != 0) base = mul.mul(base, base);
  }
  return result;
}

/// Runs f with the fastest multiplication policy valid for q.
template <class F>
decltype(auto) with_mul(std::uint64_t q, F&& f) {
  if (q < (std::uint64_t{1} << 32)) return f(BarrettMul(q));
  return f(WideMul(q));
}

}  // namespace lehmer::detail
