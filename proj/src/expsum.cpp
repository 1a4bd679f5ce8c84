#include "lehmer/expsum.hpp"

#include <cmath>
#include <string>

#include "lehmer/error.hpp"
#include "lehmer/kernels.hpp"

namespace lehmer {

namespace {

std::vector<u64> reduced(std::span<const i64> coefficients, u64 q) {
  std::vector<u64> out;
  out.reserve(coefficients.size());
  for (i64 c : coefficients) out.push_back(reduce(c, q));
  return out;
}

ComplexSum to_sum(const kernels::SumResult& r) {
  return {r.value.real(), r.value.imag(), r.terms};
}

}  // namespace

ExpSumArgs::ExpSumArgs(Modulus modulus, std::vector<i64> exponents, std::vector<i64> coefficients)
    : modulus_(std::move(modulus)), exponents_(std::move(exponents)) {
  if (exponents_.empty()) {
    throw Error(Errc::InvalidArgument, "exponent vector must be nonempty");
  }
  if (exponents_.size() != coefficients.size()) {
    throw Error(Errc::InvalidArgument, "k and lambda lengths differ (" +
                                           std::to_string(exponents_.size()) + " vs " +
                                           std::to_string(coefficients.size()) + ")");
  }
  for (i64 k : exponents_) {
    if (k == 0) throw Error(Errc::ZeroExponent, "k contains a zero component");
  }
  coefficients_.reserve(coefficients.size());
  u64 d = 0;
  for (i64 c : coefficients) {
    const i64 r = reduce_symmetric(c, modulus_.q());
    coefficients_.push_back(r);
    d = gcd(d, static_cast<u64>(r < 0 ? -r : r));
  }
  if (d != 0) gcd_class_ = d;
}

std::complex<double> e_l(u64 l, i64 z) {
  if (l == 0) throw Error(Errc::InvalidArgument, "e_l needs l >= 1");
  if (l == 1) return {1.0, 0.0};
  return kernels::unit_phase(reduce(z, l), l);
}

ComplexSum exp_sum_direct(const ExpSumArgs& args, int jobs) {
  const auto lambda = reduced(args.coefficients(), args.modulus().q());
  return to_sum(kernels::exp_sum(args.modulus(), args.exponents(), lambda, jobs));
}

ComplexSum exp_sum_direct_serial(const ExpSumArgs& args) {
  const auto lambda = reduced(args.coefficients(), args.modulus().q());
  return to_sum(kernels::serial::exp_sum(args.modulus(), args.exponents(), lambda));
}

ComplexSum exp_sum_crt(const ExpSumArgs& args, const CrtPlan& plan, int jobs) {
  if (!(plan.parent() == args.modulus())) {
    throw Error(Errc::PlanMismatch, "CRT plan built for q=" + std::to_string(plan.parent().q()) +
                                        " but arguments use q=" +
                                        std::to_string(args.modulus().q()));
  }
  std::complex<double> product{1.0, 0.0};
  u64 terms = 1;
  for (const auto& c : plan.components()) {
    const Modulus local(c.prime_power);
    std::vector<u64> twisted;
    twisted.reserve(args.s());
    for (i64 lambda : args.coefficients()) {
      twisted.push_back(mul_mod(c.inverse, reduce(lambda, c.prime_power), c.prime_power));
    }
    const auto factor = kernels::exp_sum(local, args.exponents(), twisted, jobs);
    product *= factor.value;
    terms *= factor.terms;
  }
  return {product.real(), product.imag(), terms};
}

double lemma_ratio(const ExpSumArgs& args, int jobs) {
  if (args.all_zero()) {
    throw Error(Errc::AllZeroCoefficients, "lemma ratio undefined for the all-zero coefficient vector");
  }
  if (args.s() < 2) {
    throw Error(Errc::InvalidArgument, "lemma ratio needs s >= 2");
  }
  const double s = static_cast<double>(args.s());
  const double d = static_cast<double>(*args.gcd_class());
  const double q = static_cast<double>(args.modulus().q());
  const double magnitude = exp_sum_direct(args, jobs).abs();
  return magnitude / (std::pow(d, 1.0 / s) * std::pow(q, 1.0 - 1.0 / s));
}

ComplexSum geometric_sum(u64 l, i64 mu, u64 upper) {
  if (l == 0) throw Error(Errc::InvalidArgument, "geometric_sum needs l >= 1");
  const u64 step = reduce(mu, l);
  if (step == 0) return {static_cast<double>(upper) + 1.0, 0.0, upper + 1};
  // (w^{U+1} - 1) / (w - 1) with w = e_l(mu); the exponent is reduced exactly.
  const u64 top = static_cast<u64>(static_cast<u128>(step) * ((upper + 1) % l) % l);
  const auto numerator = kernels::unit_phase(top, l) - 1.0;
  const auto denominator = kernels::unit_phase(step, l) - 1.0;
  const auto value = numerator / denominator;
  return {value.real(), value.imag(), upper + 1};
}

GeometricBoundRatios geometric_bound_ratios(u64 l, u64 upper) {
  if (l < 3) throw Error(Errc::InvalidArgument, "geometric bound ratios need l >= 3");
  const i64 lo = -static_cast<i64>((l - 1) / 2);
  const i64 hi = static_cast<i64>(l / 2);
  double nonzero = 0.0;
  for (i64 mu = lo; mu <= hi; ++mu) {
    if (mu != 0) nonzero += geometric_sum(l, mu, upper).abs();
  }
  const double l_log_l = static_cast<double>(l) * std::log(static_cast<double>(l));
  const double all = nonzero + static_cast<double>(upper + 1);
  return {nonzero / l_log_l, all / (static_cast<double>(upper) + l_log_l)};
}

}  // namespace lehmer
