#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <vector>

#include "divord/arith.hpp"
#include "divord/field.hpp"
#include "divord/group.hpp"
#include "divord/linalg.hpp"

using namespace divord;

namespace {

bool brute_is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::map<u64, int> trial_division(u64 n) {
  std::map<u64, int> out;
  for (u64 d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      ++out[d];
      n /= d;
    }
  if (n > 1) ++out[n];
  return out;
}

// Counts x in (Z/q)^cols with A x = 0 mod q by enumeration.
u64 brute_kernel_size(const Matrix<i64>& a, u64 q, std::size_t cols) {
  u64 total = 1, count = 0;
  for (std::size_t i = 0; i < cols; ++i) total *= q;
  for (u64 code = 0; code < total; ++code) {
    std::vector<i64> x(cols);
    u64 c = code;
    for (auto& v : x) {
      v = static_cast<i64>(c % q);
      c /= q;
    }
    bool zero = true;
    for (const auto& row : a) {
      i64 s = 0;
      for (std::size_t j = 0; j < cols; ++j) s = (s + row[j] * x[j]) % static_cast<i64>(q);
      zero = zero && s == 0;
    }
    if (zero) ++count;
  }
  return count;
}

}  // namespace

TEST(Factorize, SmallCases) {
  auto f = factorize(12);
  EXPECT_EQ(f.sign, 1);
  EXPECT_EQ(f.factors, (std::map<u64, int>{{2, 2}, {3, 1}}));
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_EQ(factorize(-18).sign, -1);
  EXPECT_EQ(factorize(-18).value(), BigInt(-18));
}

TEST(Factorize, LargeCompositeAgainstTrialDivision) {
  const u64 n = 600851475143ULL;
  EXPECT_EQ(factorize_u64(n).factors, trial_division(n));
  EXPECT_EQ(factorize_u64(n).factors, (std::map<u64, int>{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}}));
}

TEST(Factorize, ZeroIsDomainError) { EXPECT_THROW(factorize(0), std::domain_error); }

TEST(Factorize, ReconstructsRandomIntegers) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    i64 n = static_cast<i64>(rng() >> 4) * ((i & 1) ? -1 : 1);
    if (n == 0) continue;
    EXPECT_EQ(factorize(n).value(), BigInt(n)) << n;
  }
  for (u64 n = 1; n <= 5000; ++n) EXPECT_EQ(factorize_u64(n).factors, trial_division(n)) << n;
}

TEST(Factorize, SemiprimeOfLargePrimes) {
  const u64 p = 4294967291ULL, q = 4294967279ULL;
  auto f = factorize_u64(p * q);
  EXPECT_EQ(f.factors, (std::map<u64, int>{{q, 1}, {p, 1}}));
}

TEST(IsPrime, MatchesTrialDivisionBelow100000) {
  for (u64 n = 0; n < 100000; ++n) ASSERT_EQ(is_prime(n), brute_is_prime(n)) << n;
}

TEST(IsPrime, StrongPseudoprimesAreComposite) {
  EXPECT_FALSE(is_prime(2047));
  EXPECT_FALSE(is_prime(3215031751ULL));
  EXPECT_FALSE(is_prime(3825123056546413051ULL));
  EXPECT_FALSE(is_prime(4294967291ULL * 4294967279ULL));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));
}

TEST(Multiplicative, ExamplesFromDefinitions) {
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(mobius(6), 1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_EQ(euler_phi(12), 4u);
  EXPECT_EQ(radical(12), 6u);
  EXPECT_EQ(tau(12), 6u);
  EXPECT_EQ(euler_phi(1), 1u);
  EXPECT_EQ(radical(1), 1u);
  EXPECT_EQ(valuation(48, 2), 4);
  EXPECT_EQ(valuation(48, 5), 0);
}

TEST(Multiplicative, MobiusAndPhiDivisorSums) {
  for (u64 n = 1; n <= 10000; ++n) {
    int mu_sum = 0;
    u64 phi_sum = 0;
    for (u64 d : divisors(n)) {
      mu_sum += mobius(d);
      phi_sum += euler_phi(d);
    }
    ASSERT_EQ(mu_sum, n == 1 ? 1 : 0) << n;
    ASSERT_EQ(phi_sum, n) << n;
  }
}

TEST(Multiplicative, PhiAgainstGcdCount) {
  for (u64 n = 1; n <= 500; ++n) {
    u64 c = 0;
    for (u64 a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
    ASSERT_EQ(euler_phi(n), c) << n;
  }
}

TEST(Divisors, ExamplesAndBruteForce) {
  EXPECT_EQ(divisors(12), (std::vector<u64>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(1), (std::vector<u64>{1}));
  EXPECT_EQ(divisors(97), (std::vector<u64>{1, 97}));
  for (u64 n = 1; n <= 2000; ++n) {
    std::vector<u64> brute;
    for (u64 d = 1; d <= n; ++d)
      if (n % d == 0) brute.push_back(d);
    ASSERT_EQ(divisors(n), brute) << n;
    ASSERT_EQ(tau(n), brute.size());
  }
}

TEST(SmoothDivisors, Examples) {
  EXPECT_EQ(smooth_divisors(2, 10), (std::vector<u64>{1, 2, 4, 8}));
  EXPECT_EQ(smooth_divisors(6, 12), (std::vector<u64>{1, 2, 3, 4, 6, 8, 9, 12}));
  EXPECT_EQ(smooth_divisors(1, 100), (std::vector<u64>{1}));
}

TEST(SmoothDivisors, MatchesBruteFilter) {
  for (u64 m = 1; m <= 50; ++m) {
    const auto ps = prime_factors(m);
    for (u64 B : {1, 7, 100, 1000}) {
      std::vector<u64> brute;
      for (u64 n = 1; n <= B; ++n) {
        u64 rest = n;
        for (u64 p : ps)
          while (rest % p == 0) rest /= p;
        if (rest == 1) brute.push_back(n);
      }
      ASSERT_EQ(smooth_divisors(m, B), brute) << m << " " << B;
    }
  }
}

TEST(GcdSupernatural, ExamplesAndProperties) {
  EXPECT_EQ(gcd_supernatural(12, 2), 4u);
  EXPECT_EQ(gcd_supernatural(45, 6), 9u);
  EXPECT_EQ(gcd_supernatural(7, 10), 1u);
  for (u64 n = 1; n <= 300; ++n)
    for (u64 m = 1; m <= 60; ++m) {
      u64 g = gcd_supernatural(n, m);
      ASSERT_EQ(n % g, 0u);
      ASSERT_EQ(std::gcd(n / g, m), 1u);
    }
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_rat("6/8")), "3/4");
  EXPECT_EQ(to_string(parse_rat("-5")), "-5");
  EXPECT_EQ(to_string(Rat(4, 2)), "2");
  EXPECT_THROW(parse_rat("1/0"), std::exception);
}

TEST(KernelLog, MatchesEnumeration) {
  std::mt19937_64 rng(3);
  for (auto [ell, e] : std::vector<std::pair<u64, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}}) {
    const u64 q = ipow(ell, static_cast<unsigned>(e));
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t cols = 1 + rng() % 3, rows = rng() % 4;
      Matrix<i64> a(rows, std::vector<i64>(cols));
      for (auto& row : a)
        for (auto& v : row) v = static_cast<i64>(rng() % 19) - 9;
      const int k = kernel_log_size_mod_prime_power(a, ell, e, cols);
      ASSERT_EQ(ipow(ell, static_cast<unsigned>(k)), brute_kernel_size(a, q, cols)) << ell << "^" << e;
    }
  }
}

TEST(IntegerRank, SmallMatrices) {
  Matrix<BigInt> a{{2, 4}, {1, 2}};
  EXPECT_EQ(integer_rank(a), 1u);
  Matrix<BigInt> b{{1, 0}, {0, 3}};
  EXPECT_EQ(integer_rank(b), 2u);
  auto inv = smith_invariants({{2, 0}, {0, 6}});
  EXPECT_EQ(inv, (std::vector<BigInt>{2, 6}));
}

TEST(Field, BuiltinDiscriminants) {
  EXPECT_EQ(FieldSpec::builtin("Qzeta3").discriminant(), BigInt(-3));
  EXPECT_EQ(FieldSpec::builtin("Qzeta4").discriminant(), BigInt(-4));
  EXPECT_EQ(FieldSpec::builtin("Qzeta12").discriminant(), BigInt(144));
  EXPECT_EQ(FieldSpec::builtin("Qsqrtm5").discriminant(), BigInt(-20));
  EXPECT_THROW(FieldSpec::builtin("Qfoo"), std::invalid_argument);
}

TEST(Field, ReducibleAndNonMonicRejected) {
  EXPECT_THROW(FieldSpec::from_poly_string("K", "x^2-1"), std::invalid_argument);
  EXPECT_THROW(FieldSpec::from_poly_string("K", "2x^2+1"), std::invalid_argument);
  EXPECT_NO_THROW(FieldSpec::from_poly_string("K", "x^2+5"));
}

TEST(Field, ElementArithmeticAndNorm) {
  FieldSpec k = FieldSpec::builtin("Qzeta4");
  Element a = k.parse_element("a");
  EXPECT_EQ(k.mul(a, a), k.from_rat(-1));
  EXPECT_EQ(k.norm(k.parse_element("2a")), Rat(4));
  EXPECT_EQ(k.norm(k.parse_element("1+a")), Rat(2));
  EXPECT_EQ(k.root_of_unity_order(a), 4u);
  EXPECT_EQ(k.root_of_unity_order(k.parse_element("2a")), 0u);
  FieldSpec z3 = FieldSpec::builtin("Qzeta3");
  EXPECT_EQ(z3.root_of_unity_order(z3.parse_element("-a")), 6u);
}

TEST(Group, TorsionAndErrors) {
  FieldSpec q = FieldSpec::builtin("Q");
  GroupSpec g(q, {"2", "-1"});
  EXPECT_EQ(g.rank(), 1);
  EXPECT_EQ(g.torsion(), 2u);
  EXPECT_EQ(g.all_elements().size(), 2u);
  EXPECT_THROW(GroupSpec(q, {"2", "4"}), std::domain_error);
  EXPECT_THROW(GroupSpec(q, {"0"}), std::domain_error);
  EXPECT_THROW(GroupSpec(q, {"1"}), std::domain_error);
  EXPECT_THROW(GroupSpec(q, {"-1"}), std::domain_error);
  EXPECT_THROW(GroupSpec(q, {"2"}, 4), std::domain_error);
  GroupSpec z4(FieldSpec::builtin("Qzeta4"), {"2", "a"});
  EXPECT_EQ(z4.torsion(), 4u);
  EXPECT_EQ(GroupSpec::split_generators(" 2a, 27 ,25"), (std::vector<std::string>{"2a", "27", "25"}));
}
