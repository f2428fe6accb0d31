#include <gtest/gtest.h>

#include <random>

#include "divord/density.hpp"
#include "divord/kummer.hpp"
#include "divord/tables.hpp"

using namespace divord;

namespace {

DegreeTable q_table(std::vector<std::string> gens, u64 t = 1) {
  return compute_degree_table_Q(GroupSpec(FieldSpec::builtin("Q"), gens, t));
}

DegreeTable bundled(const std::string& field, std::vector<std::string> gens, u64 t = 1) {
  return resolve_degree_table(GroupSpec(FieldSpec::builtin(field), gens, t));
}

Rat exact(const DensityValue& v) {
  EXPECT_TRUE(v.exact.has_value());
  return v.exact ? *v.exact : Rat(-1);
}

// Coprime-case product (rad(m)/phi(m)) prod_{ell | m} (ell^r - 1)/(ell^{r+1} - 1).
Rat coprime_case(u64 m, int r) {
  Rat out(radical(m), euler_phi(m));
  for (u64 ell : prime_factors(m)) out *= Rat(BigInt(ipow(ell, r)) - 1, BigInt(ipow(ell, r + 1)) - 1);
  return out;
}

}  // namespace

TEST(RhoClosed, TableOneEntriesForTwo) {
  DegreeTable t = q_table({"2"});
  EXPECT_EQ(exact(rho_closed(1, t)), Rat(1));
  EXPECT_EQ(exact(rho_closed(2, t)), Rat(17, 24));
  EXPECT_EQ(exact(rho_closed(4, t)), Rat(5, 12));
  EXPECT_EQ(exact(rho_closed(16, t)), Rat(1, 24));
}

TEST(RhoClosed, CoprimeToZMatchesDisplayedProduct) {
  DegreeTable t = q_table({"2"});
  EXPECT_EQ(exact(rho_closed(5, t)), Rat(5, 24));
  EXPECT_EQ(coprime_case(5, 1), Rat(5, 24));
  for (const auto& gens : std::vector<std::vector<std::string>>{{"2"}, {"3"}, {"2", "3"}, {"2", "27", "25"}}) {
    DegreeTable tt = q_table(gens);
    for (u64 m = 1; m <= 400; ++m)
      if (std::gcd(m, tt.z) == 1) ASSERT_EQ(exact(rho_closed(m, tt)), coprime_case(m, tt.rank)) << m;
  }
}

TEST(RhoClosed, MonotoneUnderDivisibility) {
  for (const auto& gens : std::vector<std::vector<std::string>>{{"2"}, {"16", "27"}}) {
    DegreeTable t = q_table(gens);
    for (u64 m = 1; m <= 120; ++m)
      for (u64 d : divisors(m)) ASSERT_LE(exact(rho_closed(m, t)), exact(rho_closed(d, t))) << m << " " << d;
  }
}

TEST(RhoSeries, TrivialModulusIsExactlyOne) {
  DensityValue v = rho_series(1, q_table({"2"}));
  ASSERT_TRUE(v.interval);
  EXPECT_EQ(v.interval->first, Rat(1));
  EXPECT_EQ(v.interval->second, Rat(1));
}

TEST(RhoSeries, ContainsClosedFormForTableOneEntries) {
  DensityValue two = rho_series(2, q_table({"2"}), FrobTrivial{}, 1024);
  EXPECT_TRUE(two.contains(Rat(17, 24)));
  DensityValue three = rho_series(3, q_table({"3"}), FrobTrivial{}, 6561);
  EXPECT_TRUE(three.contains(Rat(3, 8)));
  DensityValue narrow = rho_series_to_width(2, q_table({"2"}), Rat(1, 1000000));
  EXPECT_TRUE(narrow.contains(Rat(17, 24)));
  EXPECT_LT(narrow.width(), Rat(1, 1000000));
}

TEST(RhoSeries, AgreesWithClosedFormAcrossGroupsAndFields) {
  std::vector<DegreeTable> tables{q_table({"2"}), q_table({"2", "3"}), q_table({"7"}, 2), bundled("Qzeta3", {"16", "27"}),
                                  bundled("Qzeta4", {"2a"}), bundled("Qsqrtm5", {"2", "3"})};
  for (const auto& t : tables)
    for (u64 m : {2, 3, 4, 6, 9, 12, 16, 27, 10}) {
      DensityValue s = rho_series_to_width(m, t, Rat(1, 100000));
      ASSERT_TRUE(s.contains(exact(rho_closed(m, t)))) << t.field << " <" << t.generators << "> m=" << m;
    }
}

TEST(RhoSeries, TermsBoundedByReciprocalDegree) {
  DegreeTable t = q_table({"2", "3"});
  for (u64 m : {2, 3, 4, 6, 12}) {
    for (u64 n : smooth_divisors(m, 200 / m)) {
      Rat term = 0;
      for (u64 d : divisors(m)) term += Rat(mobius(d)) / Rat(lift_degree(t, m * n, d * n));
      ASSERT_GE(term, 0);
      ASSERT_LE(term, Rat(1) / Rat(lift_degree(t, m * n, n)));
    }
  }
}

TEST(Torsion, ReduceModulus) {
  EXPECT_EQ(torsion_reduce(2, 2), 1u);
  EXPECT_EQ(torsion_reduce(12, 2), 12u);
  EXPECT_EQ(torsion_reduce(36, 1), 36u);
  EXPECT_EQ(torsion_reduce(12, 12), 1u);
  EXPECT_EQ(torsion_reduce(24, 6), 8u);
}

TEST(Torsion, MinusOneMakesEvenOrderCertain) {
  DegreeTable t = q_table({"3"}, 2);
  EXPECT_EQ(exact(rho_closed(2, t)), Rat(1));
  EXPECT_EQ(exact(rho_closed(3, t)), exact(rho_closed(3, q_table({"3"}))));
}

TEST(Beta, ScaledMultipliersFromTablesSixAndSeven) {
  DensityValue a = beta_closed(2, bundled("Qzeta3", {"2"}));
  ASSERT_TRUE(a.scaled);
  EXPECT_EQ(a.scaled->q, Rat(3, 4));
  EXPECT_NEAR(static_cast<double>(a.scaled->approx), 0.398, 0.0005);
  DensityValue b = beta_closed(2, bundled("Qzeta4", {"16"}));
  EXPECT_EQ(b.scaled->q, Rat(11, 8));
  EXPECT_NEAR(static_cast<double>(b.scaled->approx), 0.730, 0.0005);
}

TEST(Beta, SquarefullTorsionForcesZero) {
  DegreeTable t = bundled("Qzeta4", {"2"}, 4);
  EXPECT_EQ(exact(beta_closed(2, t)), Rat(0));
  DensityValue s = beta_series(2, t);
  EXPECT_EQ(s.interval->first, Rat(0));
  EXPECT_EQ(s.interval->second, Rat(0));
  EXPECT_THROW(beta_closed(1, t), std::domain_error);
}

TEST(Beta, SeriesIntervalContainsClosedValue) {
  struct Case {
    DegreeTable t;
    int k;
  };
  for (const auto& c : std::vector<Case>{{bundled("Qzeta3", {"2"}), 2}, {bundled("Qzeta4", {"3"}), 3}, {q_table({"2"}), 2}}) {
    DensityValue closed = beta_closed(c.k, c.t);
    DensityValue series = beta_series(c.k, c.t, 50);
    ASSERT_TRUE(series.interval);
    const long double lo = to_long_double(series.interval->first), hi = to_long_double(series.interval->second);
    EXPECT_LE(lo, closed.scaled->approx + closed.scaled->error) << c.t.generators;
    EXPECT_GE(hi, closed.scaled->approx - closed.scaled->error) << c.t.generators;
  }
}

TEST(Constant, TableFiveSpotValues) {
  EXPECT_NEAR(static_cast<double>(A_constant(2, 1, 100000).value), 0.530712, 1e-6);
  EXPECT_NEAR(static_cast<double>(A_constant(5, 3, 100000).value), 0.935552, 1e-6);
  EXPECT_NEAR(static_cast<double>(A_constant(8, 5, 100000).value), 0.992082, 1e-6);
  auto a = A_constant(2, 1, 1000);
  EXPECT_LE(std::fabs(static_cast<double>(a.value - A_constant(2, 1, 100000).value)), static_cast<double>(a.error));
}

TEST(Gamma, TableEightSpotValues) {
  EXPECT_EQ(exact(gamma_closed(6, 1, bundled("Qsqrtm5", {"2"}))), Rat(35, 192));
  EXPECT_EQ(exact(gamma_closed(6, 9, bundled("Qsqrtm5", {"27"}))), Rat(1, 216));
  EXPECT_EQ(exact(gamma_closed(6, 12, bundled("Qsqrtm5", {"2", "3"}))), Rat(10, 91));
  EXPECT_EQ(exact(gamma_via_rho(6, 2, bundled("Qsqrtm5", {"2"}))), Rat(35, 192));
}

TEST(Gamma, RejectsBadShapes) {
  DegreeTable t = q_table({"2"});
  EXPECT_THROW(gamma_closed(4, 2, t), std::domain_error);
  EXPECT_THROW(gamma_closed(6, 5, t), std::domain_error);
  EXPECT_THROW(gamma_via_rho(2, 3, t), std::domain_error);
}

TEST(Gamma, ClosedEqualsMobiusRouteAndPartitionsUnity) {
  std::vector<DegreeTable> tables{q_table({"2"}), q_table({"16", "27"}), q_table({"5"}, 2), bundled("Qzeta3", {"2", "3"}),
                                  bundled("Qzeta12", {"27"}), bundled("Qsqrtm5", {"16", "27"})};
  for (const auto& t : tables) {
    for (u64 k : {2, 3, 5, 6, 30})
      for (u64 m : divisors(k * k))
        ASSERT_EQ(exact(gamma_closed(k, m, t)), exact(gamma_via_rho(k, m, t))) << t.generators << " " << k << " " << m;
    for (u64 ell : {2, 3, 5}) {
      Rat sum = exact(rho_closed(ipow(ell, 5), t));
      for (unsigned a = 0; a <= 4; ++a) {
        const Rat g = exact(gamma_closed(ell, ipow(ell, a), t));
        ASSERT_EQ(g, exact(rho_closed(ipow(ell, a), t)) - exact(rho_closed(ipow(ell, a + 1), t)));
        sum += g;
      }
      ASSERT_EQ(sum, Rat(1)) << t.generators << " ell=" << ell;
    }
  }
}

TEST(Coprime, InclusionExclusionOverQ) {
  DegreeTable t = q_table({"2"});
  EXPECT_EQ(exact(coprime_density(1, t)), Rat(1));
  EXPECT_EQ(exact(coprime_density(2, t)), Rat(7, 24));
  EXPECT_EQ(exact(coprime_density(6, t)), Rat(1) - Rat(17, 24) - Rat(3, 8) + Rat(17, 64));
  EXPECT_THROW(coprime_density(4, t), std::domain_error);
}

TEST(Frobenius, ModesScaleExactly) {
  DegreeTable t = q_table({"2"});
  DensityValue base = rho_closed(2, t);
  EXPECT_EQ(exact(apply_frobenius_mode(base, FrobTrivial{})), Rat(17, 24));
  EXPECT_EQ(exact(apply_frobenius_mode(base, FrobSplitCompletely{2, t})), Rat(17, 48));
  EXPECT_EQ(exact(apply_frobenius_mode(DensityValue::of_exact(Rat(3, 8)), FrobLinearlyDisjoint{1, 3})), Rat(1, 8));
  EXPECT_THROW(apply_frobenius_mode(base, FrobLinearlyDisjoint{4, 3}), std::domain_error);
  EXPECT_THROW(apply_frobenius_mode(base, FrobOracle{}), std::domain_error);
}

TEST(Frobenius, OracleWithTrivialCoefficientsMatchesTrivialSeries) {
  DegreeTable t = q_table({"2"});
  FrobOracle o;
  o.coeff = [](u64, u64) { return u64{1}; };
  o.degree_F = [&](u64 a, u64 b) { return lift_degree(t, a, b); };
  o.cap = 1;
  DensityValue v = rho_series(2, t, o, 4096);
  DensityValue w = rho_series(2, t, FrobTrivial{}, 4096);
  EXPECT_EQ(v.interval->first, w.interval->first);
  EXPECT_TRUE(v.contains(Rat(17, 24)));
}

TEST(RhoClosed, PhiScaledValuesStayBounded) {
  for (const auto& gens : std::vector<std::vector<std::string>>{{"2"}, {"16", "27"}, {"2", "27", "25"}}) {
    DegreeTable t = q_table(gens);
    Rat sup = 0;
    for (u64 m = 1; m <= 500; ++m) sup = std::max(sup, exact(rho_closed(m, t)) * Rat(euler_phi(m)));
    EXPECT_LE(sup, 2 * t.max_defect()) << t.generators << " sup " << to_string(sup);
  }
}
