#include <gtest/gtest.h>

#include "gsynch/ldlr.hpp"

using namespace gsynch;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::config_error;
}

LdlrOptions rational() {
  LdlrOptions o;
  o.arithmetic = Arithmetic::rational;
  return o;
}

}  // namespace

TEST(SStat, KnownValues) {
  EXPECT_EQ(s_stat({3, 3, 3}), 0.0);
  EXPECT_EQ(s_stat({5, 0}), 12.5);  // n^2 / 2
  EXPECT_EQ(s_stat({3, 0, 0}), 9.0);
  EXPECT_EQ(s_stat_exact({2, 1}), Rational(1, 2));
  EXPECT_EQ(s_stat_twice({4, 0, 0, 0}), BigInt(48));
}

TEST(SStat, RejectsBadCounts) {
  EXPECT_EQ(kind_of([] { s_stat({2, -1}); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { s_stat({2, 1}, 4); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { s_stat({}); }), ErrorKind::invalid_parameter);
}

TEST(Moments, SmallTableAllRoutes) {
  const std::vector<Rational> expected = {1, 4, 28, 268, 3196};
  EXPECT_EQ(moments_multinomial(3, 4, 4, rational()).exact, expected);
  EXPECT_EQ(moments_bruteforce(3, 4, 4, rational()).exact, expected);
  EXPECT_EQ(moments_sequential(3, 4, 4, Arithmetic::rational).exact, expected);
}

// L = 2: S = (n_1 - n_2)^2 / 2 with n_1 - n_2 a Rademacher walk; E R^4 = 3n^2 - 2n.
TEST(Moments, TwoCellsMatchRademacherWalk) {
  for (int n : {1, 2, 7, 30}) {
    const auto m = moments_multinomial(2, n, 2, rational());
    EXPECT_EQ(m.exact[1], Rational(n, 2));
    EXPECT_EQ(m.exact[2], Rational(3 * n * n - 2 * n, 4));
  }
}

TEST(Moments, FirstMomentClosedForm) {
  for (int L = 2; L <= 6; ++L)
    for (int n : {3, 25, 400}) {
      const auto m = moments_sequential(L, n, 1);
      EXPECT_NEAR(m.values[1], n * (L - 1) / 2.0, 1e-9 * n * L) << "L=" << L << " n=" << n;
    }
}

TEST(Moments, FloatRoutesAgree) {
  const auto a = moments_multinomial(5, 30, 5);
  const auto b = moments_sequential(5, 30, 5);
  for (int d = 0; d <= 5; ++d) EXPECT_NEAR(a.values[d] / b.values[d], 1.0, 1e-10) << d;
}

TEST(Moments, BudgetExceededIsResourceLimit) {
  LdlrOptions o;
  o.budget.enumeration = 100;
  EXPECT_EQ(kind_of([&] { moments_multinomial(6, 40, 2, o); }), ErrorKind::resource_limit);
  EXPECT_EQ(kind_of([&] { moments_bruteforce(3, 10, 2, o); }), ErrorKind::resource_limit);
}

TEST(Ldlr, ZeroSignalIsOne) {
  const auto r = ldlr_exact_multinomial(4, 6, 0.0, 5, rational());
  EXPECT_EQ(*r.exact_cumulative, Rational(1));
  EXPECT_EQ(r.terms.front(), 1.0);
}

TEST(Ldlr, TermsFollowDefinition) {
  const double lambda = 0.75;
  const int L = 3, n = 4;
  const auto m = moments_multinomial(L, n, 4, rational());
  const auto r = ldlr_from_moments(m, lambda, LdlrMethod::exact_multinomial, Arithmetic::rational);
  double fact = 1.0;
  for (int d = 0; d <= 4; ++d) {
    if (d > 0) fact *= d;
    const double t = std::pow(lambda, 2 * d) / (std::pow(n, d) * fact) * m.values[d];
    EXPECT_NEAR(r.terms[d], t, 1e-14 * std::max(1.0, t));
  }
  const auto ps = r.partial_sums();
  EXPECT_NEAR(ps.back(), r.cumulative, 1e-14);
}

TEST(Ldlr, BruteForceRejectsCircle) {
  EXPECT_EQ(kind_of([] { ldlr_bruteforce_signals(ModelSpec::circle(2), 3, 0.5, 2); }), ErrorKind::invalid_parameter);
}

TEST(MdCount, BaseCases) {
  for (int L : {2, 3, 5})
    for (int n : {1, 4, 9}) {
      EXPECT_EQ(md_count(MdPrior::circle, L, n, 0), 1u);
      EXPECT_EQ(md_count(MdPrior::circle, L, n, 1), static_cast<std::uint64_t>(L * n));
    }
}

TEST(MdCount, CircleContainedInCyclic) {
  for (int L : {2, 3, 4})
    for (int n = 1; n <= 4; ++n)
      for (int d = 0; d <= 3; ++d)
        EXPECT_LE(md_count(MdPrior::circle, L, n, d), md_count(MdPrior::cyclic, L, n, d))
            << "L=" << L << " n=" << n << " d=" << d;
}

TEST(MdCount, CyclicModelFormMatchesMoments) {
  for (int L : {2, 3, 4})
    for (int n = 1; n <= 4; ++n) {
      const auto md = ldlr_from_md(MdPrior::cyclic, L, n, 0.8, 3);
      const auto ex = ldlr_exact_multinomial(L, n, 0.8, 3, rational());
      EXPECT_EQ(md.exact_terms, ex.exact_terms) << "L=" << L << " n=" << n;
    }
}

TEST(MdCount, CircleFirstOrder) {
  const auto r = ldlr_from_md(MdPrior::circle, 3, 5, 0.6, 1);
  EXPECT_NEAR(r.cumulative, 1.0 + 0.36 * 3, 1e-15);
}

TEST(MdCount, TupleBudget) {
  Budget b;
  b.tuples = 1e3;
  EXPECT_EQ(kind_of([&] { md_count(MdPrior::cyclic, 4, 10, 3, MdForm::lemma, b); }), ErrorKind::resource_limit);
}

TEST(MonteCarlo, AgreesWithExactWithinStandardErrors) {
  MonteCarloOptions mc;
  mc.samples = 20000;
  mc.seed = 4;
  const auto r = ldlr_montecarlo_overlap(ModelSpec::cyclic(3), 12, 0.8, 3, mc);
  const auto ex = ldlr_exact_multinomial(3, 12, 0.8, 3);
  ASSERT_TRUE(r.cumulative_stderr.has_value());
  EXPECT_LT(std::abs(r.cumulative - ex.cumulative), 4.0 * *r.cumulative_stderr + 1e-12);
}

TEST(MonteCarlo, TooFewSamplesIsInvalid) {
  MonteCarloOptions mc;
  mc.samples = 10;
  EXPECT_EQ(kind_of([&] { ldlr_montecarlo_overlap(ModelSpec::cyclic(3), 5, 0.5, 2, mc); }),
            ErrorKind::invalid_parameter);
}

TEST(MonteCarlo, Deterministic) {
  MonteCarloOptions mc;
  mc.samples = 500;
  mc.seed = 8;
  const auto a = ldlr_montecarlo_overlap(ModelSpec::circle(2), 10, 0.5, 3, mc);
  const auto b = ldlr_montecarlo_overlap(ModelSpec::circle(2), 10, 0.5, 3, mc);
  EXPECT_EQ(a.terms, b.terms);
}
