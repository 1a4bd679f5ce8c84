#include "lehmer/counting.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "lehmer/error.hpp"
#include "lehmer/random.hpp"
#include "oracles.hpp"

namespace lehmer {
namespace {

ProblemSpec spec(std::vector<i64> k, std::vector<u64> m, std::vector<i64> a) {
  return ProblemSpec(std::move(k), std::move(m), std::move(a));
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InvalidArgument;
}

TEST(ProblemSpec, NormalizesAndValidates) {
  const auto p = spec({1, -1}, {3, 4}, {-1, 9});
  EXPECT_EQ(p.a(), (std::vector<u64>{2, 1}));
  EXPECT_EQ(code_of([] { spec({1, 0}, {2, 2}, {0, 0}); }), Errc::ZeroExponent);
  EXPECT_EQ(code_of([] { spec({1, 1}, {2}, {0, 0}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([] { spec({1}, {0}, {0}); }), Errc::InvalidArgument);
}

TEST(CountDirect, Examples) {
  EXPECT_EQ(count_direct(Modulus(5), spec({1, -1}, {2, 2}, {1, 1})), 1u);
  EXPECT_EQ(count_direct(Modulus(360), spec({3, -2}, {1, 1}, {0, 0})), 96u);
  EXPECT_EQ(count_direct(Modulus(7), spec({1, 1}, {2, 2}, {0, 1})), 0u);
}

TEST(CountDirect, SerialReferenceAndOracleAgree) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const u64 q = static_cast<u64>(uniform_int(rng, 2, 1500));
    const std::size_t s = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    std::vector<i64> k(s), a(s);
    std::vector<u64> m(s), ar(s);
    for (std::size_t j = 0; j < s; ++j) {
      do k[j] = uniform_int(rng, -4, 4); while (k[j] == 0);
      m[j] = static_cast<u64>(uniform_int(rng, 1, 7));
      a[j] = uniform_int(rng, 0, static_cast<i64>(m[j]) - 1);
      ar[j] = static_cast<u64>(a[j]);
    }
    const Modulus mod(q);
    const auto p = spec(k, m, a);
    const u64 want = oracle::count(q, k, m, ar);
    EXPECT_EQ(count_direct(mod, p, 2), want);
    EXPECT_EQ(count_direct_serial(mod, p), want);
  }
}

TEST(CongruenceSystem, RecordsSatisfyDefinitions) {
  const Modulus q(101);
  const auto p = spec({1, -1, 2}, {2, 3, 7}, {1, 2, 6});
  const CongruenceSystem system(q, p);
  for (std::size_t j = 0; j < p.s(); ++j) {
    const auto& r = system.records()[j];
    EXPECT_EQ(r.r * p.m()[j] % 101, 1u);
    EXPECT_EQ(r.b, p.a()[j] * r.r % 101);
    const i64 mj = static_cast<i64>(p.m()[j]), aj = static_cast<i64>(p.a()[j]);
    EXPECT_LT(mj * r.upper + aj, 101);
    EXPECT_GE(mj * (r.upper + 1) + aj, 101);
  }
}

TEST(CountViaCongruenceSystem, Examples) {
  EXPECT_EQ(count_via_congruence_system(Modulus(5), spec({1, -1}, {2, 2}, {1, 1})), 1u);
  EXPECT_EQ(count_via_congruence_system(Modulus(97), spec({2, -3}, {1, 1}, {0, 0})), 96u);
  EXPECT_EQ(code_of([] { count_via_congruence_system(Modulus(10), spec({1, 1}, {2, 3}, {0, 0})); }),
            Errc::CoprimalityViolation);
}

TEST(CountViaCongruenceSystem, EqualsDirectCount) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const u64 q = static_cast<u64>(uniform_int(rng, 2, 2000));
    const std::size_t s = static_cast<std::size_t>(uniform_int(rng, 2, 3));
    std::vector<i64> k(s), a(s);
    std::vector<u64> m(s);
    for (std::size_t j = 0; j < s; ++j) {
      do k[j] = uniform_int(rng, -4, 4); while (k[j] == 0);
      do m[j] = static_cast<u64>(uniform_int(rng, 1, 6)); while (std::gcd(m[j], q) != 1);
      a[j] = uniform_int(rng, -10, 10);
    }
    const Modulus mod(q);
    const auto p = spec(k, m, a);
    ASSERT_EQ(count_via_congruence_system(mod, p), count_direct(mod, p)) << "q=" << q;
  }
}

TEST(CountViaCongruenceSystem, HandlesModuliLargerThanQ) {
  // m_j > q with a_j >= q: the residue class is empty.
  const Modulus q(7);
  const auto p = spec({1, -1}, {9, 1}, {8, 0});
  EXPECT_EQ(count_via_congruence_system(q, p), 0u);
  EXPECT_EQ(count_direct(q, p), 0u);
  const auto hit = spec({1, -1}, {9, 1}, {3, 0});
  EXPECT_EQ(count_via_congruence_system(q, hit), 1u);
  EXPECT_EQ(count_direct(q, hit), 1u);
}

TEST(MainTerm, Examples) {
  EXPECT_EQ(main_term(Modulus(5), spec({1, -1}, {2, 2}, {0, 0})), (Rational{1, 1}));
  EXPECT_EQ(main_term(Modulus(7), spec({1, -1}, {2, 2}, {0, 0})), (Rational{3, 2}));
  EXPECT_EQ(main_term(Modulus(10007), spec({1, -1}, {2, 2}, {0, 0})), (Rational{5003, 2}));
}

TEST(UBounds, Examples) {
  EXPECT_EQ(u_bounds(Modulus(10), spec({1}, {3}, {1})).upper, (std::vector<i64>{2}));
  EXPECT_EQ(u_bounds(Modulus(10), spec({1}, {1}, {0})).upper, (std::vector<i64>{9}));
  const auto b = u_bounds(Modulus(101), spec({1, -1}, {2, 2}, {0, 0}));
  EXPECT_EQ(b.upper, (std::vector<i64>{50, 50}));
  // 101^2 / 4 - 2500 = 50.25
  EXPECT_EQ(b.deviation, boost::multiprecision::cpp_rational(201, 4));
  EXPECT_EQ(b.allowance, 202);
  EXPECT_TRUE(b.within_allowance());
}

TEST(ParityReport, SmallTables) {
  // (q, k) -> (both_even, both_odd), enumerated by hand from the pairs (n^k, n^-k).
  struct Row {
    u64 q;
    i64 k;
    u64 even, odd;
  };
  const Row rows[] = {{3, 1, 1, 1}, {3, 2, 0, 2}, {3, 3, 1, 1}, {5, 1, 1, 1}, {5, 2, 2, 2},
                      {5, 3, 1, 1}, {7, 1, 3, 3}, {7, 2, 4, 2}, {7, 3, 3, 3}, {9, 1, 1, 1},
                      {9, 2, 0, 2}, {9, 3, 3, 3}};
  for (const auto& row : rows) {
    const auto r = parity_report(Modulus(row.q), row.k);
    EXPECT_EQ(r.both_even, row.even) << row.q << " " << row.k;
    EXPECT_EQ(r.both_odd, row.odd) << row.q << " " << row.k;
    EXPECT_EQ(r.same_parity, row.even + row.odd);
    EXPECT_EQ(r.main_term, Rational::make(Modulus(row.q).phi(), 2));
  }
  const auto q3 = parity_report(Modulus(3), 1);
  EXPECT_EQ(q3.same_parity, 2u);
  EXPECT_EQ(q3.error, 1.0);
  const auto q5 = parity_report(Modulus(5), 1);
  EXPECT_EQ(q5.error, 0.0);
}

TEST(ParityReport, MatchesCountDirectAndRejectsEven) {
  for (u64 q : {15u, 101u, 2187u}) {
    const Modulus m(q);
    for (i64 k : {1, 2, -3}) {
      const auto r = parity_report(m, k);
      EXPECT_EQ(r.both_even, count_direct(m, spec({k, -k}, {2, 2}, {0, 0})));
      EXPECT_EQ(r.both_odd, count_direct(m, spec({k, -k}, {2, 2}, {1, 1})));
    }
  }
  EXPECT_EQ(code_of([] { parity_report(Modulus(10), 1); }), Errc::EvenModulus);
}

TEST(ParityReport, LargePrimeWithinBounds) {
  const double q = 10007;
  const auto r = parity_report(Modulus(10007), 2);
  EXPECT_LE(std::abs(r.error), std::pow(q, 0.75));
  EXPECT_LE(std::abs(r.error), 3.0 * std::sqrt(q) * std::pow(std::log(q), 2));
}

TEST(CountReport, Examples) {
  const auto r = count_report(Modulus(5), spec({1, -1}, {2, 2}, {1, 1}));
  EXPECT_EQ(r.count, 1u);
  EXPECT_EQ(r.main_term, (Rational{1, 1}));
  EXPECT_EQ(r.error, 0.0);
  EXPECT_FALSE(r.normalized_exponent.has_value());
  EXPECT_TRUE(r.theorem_applicable);

  const auto trivial = count_report(Modulus(360), spec({1, 2}, {1, 1}, {0, 0}));
  EXPECT_EQ(trivial.count, 96u);
  EXPECT_EQ(trivial.error, 0.0);

  const auto flagged = count_report(Modulus(100), spec({2, -1}, {3, 4}, {1, 1}));
  EXPECT_FALSE(flagged.theorem_applicable);
  EXPECT_EQ(flagged.count, count_direct(Modulus(100), spec({2, -1}, {3, 4}, {1, 1})));

  const auto big_m = count_report(Modulus(7), spec({1, 1}, {11, 2}, {3, 1}));
  EXPECT_TRUE(big_m.modulus_exceeded);

  const auto with_exp = count_report(Modulus(7), spec({1, -1}, {2, 2}, {0, 0}));
  // N = 3, main = 3/2 -> E = 1.5
  EXPECT_EQ(with_exp.count, 3u);
  EXPECT_DOUBLE_EQ(with_exp.error, 1.5);
  ASSERT_TRUE(with_exp.normalized_exponent.has_value());
  EXPECT_NEAR(*with_exp.normalized_exponent, std::log(1.5) / std::log(7.0), 1e-15);
}

TEST(CountReport, CellsPartitionUnits) {
  const Modulus q100(100);
  u64 total = 0;
  for (i64 a1 = 0; a1 < 3; ++a1) {
    for (i64 a2 = 0; a2 < 4; ++a2) total += count_direct(q100, spec({2, -1}, {3, 4}, {a1, a2}));
  }
  EXPECT_EQ(total, q100.phi());

  for (u64 q = 2; q <= 500; q += 3) {
    const Modulus m(q);
    const auto cells = count_all_cells(m, {1, -1}, {4, 3});
    EXPECT_EQ(std::accumulate(cells.begin(), cells.end(), u64{0}), m.phi());
  }
}

TEST(CountReport, BoundedByPhiAndFullOnlyWhenVacuous) {
  for (u64 q = 3; q <= 300; q += 7) {
    const Modulus m(q);
    EXPECT_LE(count_direct(m, spec({1, 2}, {2, 3}, {1, 1})), m.phi());
    EXPECT_EQ(count_direct(m, spec({1, 2}, {1, 1}, {0, 0})), m.phi());
  }
}

TEST(CountDirect, InverseSymmetry) {
  // n -> n^{-1} maps residue vectors for k onto those for -k.
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const u64 q = static_cast<u64>(uniform_int(rng, 3, 800));
    std::vector<i64> k(2), negk(2), a(2);
    std::vector<u64> m(2);
    for (int j = 0; j < 2; ++j) {
      do k[j] = uniform_int(rng, -4, 4); while (k[j] == 0);
      negk[j] = -k[j];
      m[j] = static_cast<u64>(uniform_int(rng, 1, 5));
      a[j] = uniform_int(rng, 0, static_cast<i64>(m[j]) - 1);
    }
    const Modulus mod(q);
    EXPECT_EQ(count_direct(mod, spec(k, m, a)), count_direct(mod, spec(negk, m, a)));
  }
}

}  // namespace
}  // namespace lehmer
