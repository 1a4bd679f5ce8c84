#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "lehmer/ntcore.hpp"

namespace lehmer {

/// A complete exponential sum over U_q.
struct ComplexSum {
  double re = 0.0;
  double im = 0.0;
  u64 terms = 0;

  std::complex<double> value() const { return {re, im}; }
  double abs() const { return std::abs(value()); }
  friend bool operator==(const ComplexSum&, const ComplexSum&) = default;
};

/// Arguments of S(lambda; k, q) = sum_{n in U_q} e_q(sum_j lambda_j n^{k_j}).
/// Coefficients are stored in the symmetric range (-(q-1)/2, q/2].
class ExpSumArgs {
 public:
  ExpSumArgs(Modulus modulus, std::vector<i64> exponents, std::vector<i64> coefficients);

  const Modulus& modulus() const { return modulus_; }
  const std::vector<i64>& exponents() const { return exponents_; }
  const std::vector<i64>& coefficients() const { return coefficients_; }
  std::size_t s() const { return exponents_.size(); }

  /// gcd of the nonzero coefficients; empty when every coefficient is zero.
  std::optional<u64> gcd_class() const { return gcd_class_; }
  bool all_zero() const { return !gcd_class_.has_value(); }

 private:
  Modulus modulus_;
  std::vector<i64> exponents_;
  std::vector<i64> coefficients_;
  std::optional<u64> gcd_class_;
};

/// e_l(z) = exp(2 pi i z / l), with z reduced modulo l first.
std::complex<double> e_l(u64 l, i64 z);

ComplexSum exp_sum_direct(const ExpSumArgs& args, int jobs = 0);

/// One-term-at-a-time reference for exp_sum_direct.
ComplexSum exp_sum_direct_serial(const ExpSumArgs& args);

/// The same sum as a product of sums modulo the prime-power factors of q,
/// each with its coefficients twisted by t_i.
ComplexSum exp_sum_crt(const ExpSumArgs& args, const CrtPlan& plan, int jobs = 0);

/// |S| / (d^{1/s} q^{1 - 1/s}).
double lemma_ratio(const ExpSumArgs& args, int jobs = 0);

/// sum_{u=0}^{U} e_l(mu u), closed form unless mu == 0 (mod l).
ComplexSum geometric_sum(u64 l, i64 mu, u64 upper);

struct GeometricBoundRatios {
  double r1 = 0.0;  // sum over mu != 0 of |geometric_sum| / (l ln l)
  double r2 = 0.0;  // sum over all mu of |geometric_sum| / (U + l ln l)
};

/// mu runs over the symmetric range -(l-1)/2 <= mu <= l/2. Requires l >= 3.
GeometricBoundRatios geometric_bound_ratios(u64 l, u64 upper);

}  // namespace lehmer
