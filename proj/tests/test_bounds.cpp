#include <gtest/gtest.h>

#include "gsynch/bounds.hpp"

using namespace gsynch;

namespace {

// Li_{-s}(z) = z A_s(z) / (1 - z)^{s+1} with Eulerian polynomial A_s.
double eulerian_polylog(int s, double z) {
  std::vector<std::vector<double>> a(s + 1);
  a[0] = {1.0};
  for (int m = 1; m <= s; ++m) {
    a[m].assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
      const double left = k < static_cast<int>(a[m - 1].size()) ? a[m - 1][k] * (k + 1) : 0.0;
      const double right = k >= 1 ? a[m - 1][k - 1] * (m - k) : 0.0;
      a[m][k] = left + right;
    }
  }
  if (s == 0) return z / (1 - z);
  double poly = 0.0;
  for (int k = 0; k < s; ++k) poly += a[s][k] * std::pow(z, k);
  return z * poly / std::pow(1 - z, s + 1);
}

}  // namespace

TEST(Polylog, MatchesEulerianClosedForm) {
  for (int s : {0, 1, 2, 4, 6, 10})
    for (double z : {0.1, 0.5, 0.81, 0.95})
      EXPECT_NEAR(polylog_negative(s, z) / eulerian_polylog(s, z), 1.0, 1e-10) << "s=" << s << " z=" << z;
  EXPECT_NEAR(polylog_negative(2, 0.5), 6.0, 1e-12);
}

TEST(Polylog, DivergesAtOne) {
  try {
    polylog_negative(2, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::divergent_series);
  }
  EXPECT_THROW(bound_polylog(3, 1.0, 5), Error);
  EXPECT_NO_THROW(bound_polylog(3, 1.0, 5, false));
}

TEST(Polylog, PartialSumsIncreaseToLimit) {
  const auto b = bound_polylog(3, 0.9, 300);
  EXPECT_EQ(b.partial_sums.front(), 0.0);
  for (std::size_t d = 1; d < b.partial_sums.size(); ++d) EXPECT_GE(b.partial_sums[d], b.partial_sums[d - 1]);
  EXPECT_NEAR(b.partial / *b.limit, 1.0, 1e-9);
}

TEST(Clt, RademacherSmallCasesExact) {
  // n = 1: E|X|^{2a} = 1.
  const auto r = check_clt_moment_bound(Distribution::rademacher(), 1, 2.0);
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  // n = 2, a = 1: E S^2 = 2.
  EXPECT_NEAR(check_clt_moment_bound(Distribution::rademacher(), 2, 1.0).lhs, 2.0, 1e-12);
  // Bernoulli(1/2) centred: E S^2 = n/4.
  EXPECT_NEAR(check_clt_moment_bound(Distribution::bernoulli(0.5), 8, 1.0).lhs, 2.0, 1e-12);
}

TEST(Clt, HoldsOnGrid) {
  for (const auto& dist : {Distribution::rademacher(), Distribution::bernoulli(0.2)})
    for (int n : {1, 3, 40, 2000})
      for (double a = 0.0; a <= 6.0; a += 0.5) EXPECT_TRUE(check_clt_moment_bound(dist, n, a).holds);
}

TEST(Clt, InvalidDistribution) {
  EXPECT_THROW(Distribution::bernoulli(0.0), Error);
  EXPECT_THROW(Distribution::bernoulli(1.5), Error);
}

TEST(TRecursion, HoldsForSmallCases) {
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> alpha(k, 1.0);
    const auto r = check_t_recursion(4, 6, k, alpha, 0.5);
    EXPECT_TRUE(r.holds) << "k=" << k << " ratio=" << r.worst_ratio;
    EXPECT_GT(r.tuples, 0u);
  }
}

TEST(TRecursion, InvalidArguments) {
  EXPECT_THROW(check_t_recursion(2, 5, 1, {1.0}, 0.0), Error);
  EXPECT_THROW(check_t_recursion(4, 5, 2, {1.0}, 0.0), Error);
  EXPECT_THROW(check_t_recursion(4, 5, 1, {-1.0}, 0.0), Error);
}

TEST(L3, BoundHolds) {
  const auto rows = check_l3_moment_bound(200, 6);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) EXPECT_TRUE(r.holds) << r.d;
  EXPECT_NEAR(rows[0].moment, 200.0, 1e-9);  // E S_3 = n
}
