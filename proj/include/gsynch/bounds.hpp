#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "ldlr.hpp"
#include "linalg.hpp"

namespace gsynch {

// ---------------------------------------------------------------------------
// Polylogarithm bound  sum_d lambda^{2d} d^{2L}  and  Li_{-2L}(lambda^2)

struct PolylogBound {
  std::vector<double> partial_sums;  ///< index D
  double partial = 0.0;
  std::optional<double> limit;
};

/// Li_{-s}(z) = sum_{k>=1} k^s z^k for 0 <= z < 1. Terms grow until
/// k ~ s / (-log z), so the stopping rule only applies past the peak.
inline double polylog_negative(int s, double z) {
  require(s >= 0, "polylog_negative needs s >= 0");
  if (!(z >= 0.0)) fail(ErrorKind::invalid_parameter, "polylog_negative needs z >= 0");
  if (z >= 1.0) fail(ErrorKind::divergent_series, "Li_{-s}(z) diverges for z >= 1");
  if (z == 0.0) return 0.0;
  const double peak = s / -std::log(z);
  KahanSum sum;
  const double log_z = std::log(z);
  for (long k = 1;; ++k) {
    const double term = std::exp(s * std::log(static_cast<double>(k)) + k * log_z);
    sum.add(term);
    if (!std::isfinite(sum.value())) fail(ErrorKind::numerical_overflow, "polylog sum overflowed");
    if (k > peak && term < 1e-16 * sum.value()) break;
  }
  return sum.value();
}

inline PolylogBound bound_polylog(int L, double lambda, int D, bool with_limit = true) {
  require(L >= 1, "L must be >= 1");
  require(D >= 0, "D must be >= 0");
  require(lambda >= 0.0, "lambda must be >= 0");
  if (with_limit && lambda >= 1.0)
    fail(ErrorKind::divergent_series, "polylog limit requested with lambda >= 1");
  PolylogBound out;
  KahanSum acc;
  const double z = lambda * lambda;
  for (int d = 0; d <= D; ++d) {
    // 0^{2L} = 0 makes the d = 0 term vanish
    const double term = d == 0 ? 0.0 : std::pow(z, d) * std::pow(static_cast<double>(d), 2 * L);
    acc.add(term);
    out.partial_sums.push_back(acc.value());
  }
  out.partial = acc.value();
  if (with_limit) out.limit = polylog_negative(2 * L, z);
  return out;
}

// ---------------------------------------------------------------------------
// Moment bound for centred i.i.d. sums:
//   E|sum X|^{2a} <= 4 2^a Gamma(2a + 1) sigma^{2a} n^a

enum class CenteredLaw { rademacher, bernoulli };

struct Distribution {
  CenteredLaw law = CenteredLaw::rademacher;
  double p = 0.5;

  static Distribution rademacher() { return {CenteredLaw::rademacher, 0.5}; }
  static Distribution bernoulli(double p) {
    require(p > 0.0 && p < 1.0, "bernoulli p must lie in (0,1)");
    return {CenteredLaw::bernoulli, p};
  }
  double variance() const { return law == CenteredLaw::rademacher ? 1.0 : p * (1.0 - p); }
  std::string describe() const {
    if (law == CenteredLaw::rademacher) return "rademacher";
    std::ostringstream os;
    os << "bernoulli(" << p << ")";
    return os.str();
  }
};

struct MomentCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

namespace detail {
/// log(sum exp(x_i)) with max shift.
inline double log_sum_exp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  KahanSum s;
  for (double x : xs) s.add(std::exp(x - m));
  return m + std::log(s.value());
}
}  // namespace detail

/// Exact (up to rounding) lhs by summing over the Binomial(n, p) support.
inline MomentCheck check_clt_moment_bound(const Distribution& dist, int n, double alpha) {
  require(n >= 1, "n must be >= 1");
  require(alpha >= 0.0, "alpha must be >= 0");
  const auto lf = detail::log_factorials(n);
  const double p = dist.p;
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    // rademacher: sum = 2k - n with k ~ Bin(n, 1/2); bernoulli: k - np
    const double value = dist.law == CenteredLaw::rademacher ? 2.0 * k - n : k - n * p;
    const double log_pmf = lf[n] - lf[k] - lf[n - k] + k * std::log(p) + (n - k) * std::log1p(-p);
    if (alpha == 0.0) {
      logs.push_back(log_pmf);
    } else if (value != 0.0) {
      logs.push_back(log_pmf + 2.0 * alpha * std::log(std::abs(value)));
    }
  }
  const double log_lhs = detail::log_sum_exp(logs);
  const double log_rhs = std::log(4.0) + alpha * std::log(2.0) + std::lgamma(2.0 * alpha + 1.0) +
                         alpha * std::log(dist.variance()) + alpha * std::log(static_cast<double>(n));
  MomentCheck out;
  out.lhs = std::exp(log_lhs);
  out.rhs = std::exp(log_rhs);
  out.holds = log_lhs <= log_rhs + 1e-12;
  return out;
}

// ---------------------------------------------------------------------------
// One-step recursion for T_{k,alpha} = prod_{l<=k} |m_l/(L-l+1) - n_l|^{2 alpha_l},
// m_l = n - sum_{j<l} n_j, with n_l | past ~ Bin(m_l, 1/(L-l+1)).

struct RecursionCheck {
  bool holds = true;
  double worst_ratio = 0.0;  ///< max lhs / rhs over conditioning tuples
  double lhs_at_worst = 0.0;
  double rhs_at_worst = 0.0;
  std::vector<int> witness;  ///< conditioning tuple (n_1..n_{k-1}) at the worst ratio
  std::size_t tuples = 0;
};

namespace detail {

inline double pow0(double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); }

inline double binomial_abs_moment(int m, int cells, double alpha, const std::vector<double>& lf) {
  // E |m/cells - X|^{2 alpha}, X ~ Bin(m, 1/cells)
  if (cells == 1) return pow0(0.0, 2.0 * alpha);
  const double p = 1.0 / cells;
  KahanSum acc;
  for (int c = 0; c <= m; ++c) {
    const double w = std::exp(lf[m] - lf[c] - lf[m - c] + c * std::log(p) + (m - c) * std::log1p(-p));
    acc.add(w * pow0(std::abs(static_cast<double>(m) / cells - c), 2.0 * alpha));
  }
  return acc.value();
}

}  // namespace detail

/// Checks, for every reachable (n_1..n_{k-1}),
///   E[T_{k,alpha} m_k^gamma ... | past] = T_{k-1} m_k^gamma E|m_k/(L-k+1) - n_k|^{2 alpha_k}
/// against the bound obtained from the moment bound and the triangle
/// inequality m_k <= (L-k+1)/(L-k+2) m_{k-1} + |m_{k-1}/(L-k+2) - n_{k-1}|:
///   sum_{b=0}^{c} C(c,b) 2^{a} Gamma(a+1) s^{a} ((L-k+1)/(L-k+2) m_{k-1})^{c-b} T_{k-1}[alpha_{k-1} + b/2]
/// with a = alpha_k, s = (L-k)/(L-k+1)^2, c = ceil(a + gamma). For k = 1 the
/// bound is the pre-expansion form 2^a Gamma(a+1) s^a n^{a+gamma}.
inline RecursionCheck check_t_recursion(int L, int n, int k, const std::vector<double>& alpha, double gamma,
                                        const Budget& budget = {}) {
  require(L > 2, "check_t_recursion needs L > 2");
  require(k >= 1 && k < L, "check_t_recursion needs 1 <= k < L");
  require(n >= 1, "n must be >= 1");
  require(static_cast<int>(alpha.size()) == k, "alpha must have exactly k entries");
  require(gamma >= 0.0, "gamma must be >= 0");
  for (double a : alpha) require(a >= 0.0, "alpha entries must be >= 0");
  const double work = composition_count(k, n);  // tuples of k-1 counts with sum <= n
  if (work > budget.enumeration)
    fail(ErrorKind::resource_limit, "check_t_recursion needs " + std::to_string(work) + " conditioning tuples");

  const auto lf = detail::log_factorials(n);
  const double a = alpha[k - 1];
  const int cells = L - k + 1;
  const double s = static_cast<double>(L - k) / (static_cast<double>(cells) * cells);
  const double clt = std::pow(2.0, a) * std::tgamma(a + 1.0) * detail::pow0(s, a);

  RecursionCheck out;
  std::vector<int> past(static_cast<std::size_t>(k - 1), 0);

  auto evaluate = [&]() {
    // T_{k-2} and the pieces of the (k-1)-th factor
    double t_before = 1.0;
    int m = n;
    for (int l = 1; l <= k - 2; ++l) {
      t_before *= detail::pow0(std::abs(static_cast<double>(m) / (L - l + 1) - past[l - 1]), 2.0 * alpha[l - 1]);
      m -= past[l - 1];
    }
    const int m_prev = m;  // m_{k-1}
    double dev_prev = 0.0;
    double t_prev = t_before;
    if (k >= 2) {
      dev_prev = std::abs(static_cast<double>(m_prev) / (L - k + 2) - past[k - 2]);
      t_prev *= detail::pow0(dev_prev, 2.0 * alpha[k - 2]);
      m -= past[k - 2];
    }
    const int mk = m;
    const double lhs = t_prev * detail::pow0(static_cast<double>(mk), gamma) *
                       detail::binomial_abs_moment(mk, cells, a, lf);
    double rhs = 0.0;
    if (k == 1) {
      rhs = clt * detail::pow0(static_cast<double>(n), a + gamma);
    } else {
      const int c = static_cast<int>(std::ceil(a + gamma));
      const double shrink = static_cast<double>(L - k + 1) / (L - k + 2) * m_prev;
      double choose = 1.0;
      for (int b = 0; b <= c; ++b) {
        if (b > 0) choose = choose * (c - b + 1) / b;
        const double t_shift = t_before * detail::pow0(dev_prev, 2.0 * alpha[k - 2] + b);
        rhs += choose * clt * detail::pow0(shrink, c - b) * t_shift;
      }
    }
    ++out.tuples;
    const bool ok = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (!ok) out.holds = false;
    if (out.tuples == 1 || ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.lhs_at_worst = lhs;
      out.rhs_at_worst = rhs;
      out.witness = past;
    }
  };

  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == k - 1) {
      evaluate();
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      past[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// ---------------------------------------------------------------------------
// E S_3^d <= 8 n^d d^2 d!

struct L3Row {
  int d = 0;
  double moment = 0.0;
  double bound = 0.0;
  bool holds = false;
  bool in_regime = true;  ///< d^3 <= n
};

inline std::vector<L3Row> check_l3_moment_bound(int n, int d_max, const LdlrOptions& opt = {}) {
  require(n >= 1, "n must be >= 1");
  require(d_max >= 1, "d_max must be >= 1");
  const auto m = moments_multinomial(3, n, d_max, opt);
  std::vector<L3Row> rows;
  for (int d = 1; d <= d_max; ++d) {
    L3Row r;
    r.d = d;
    r.moment = m.values[d];
    r.bound = 8.0 * std::pow(static_cast<double>(n), d) * d * d * std::tgamma(d + 1.0);
    r.holds = r.moment <= r.bound;
    r.in_regime = static_cast<double>(d) * d * d <= n;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace gsynch
