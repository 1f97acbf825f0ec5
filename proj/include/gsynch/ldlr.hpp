#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "group.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "rng.hpp"

namespace gsynch {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Arithmetic { floating, rational };

enum class LdlrMethod { exact_multinomial, brute_force, sequential, md_count, monte_carlo };

inline std::string to_string(LdlrMethod m) {
  switch (m) {
    case LdlrMethod::exact_multinomial: return "exact";
    case LdlrMethod::brute_force: return "brute";
    case LdlrMethod::sequential: return "sequential";
    case LdlrMethod::md_count: return "md";
    case LdlrMethod::monte_carlo: return "mc";
  }
  return "?";
}

inline LdlrMethod ldlr_method_from_string(const std::string& s) {
  if (s == "exact") return LdlrMethod::exact_multinomial;
  if (s == "brute") return LdlrMethod::brute_force;
  if (s == "sequential") return LdlrMethod::sequential;
  if (s == "md") return LdlrMethod::md_count;
  if (s == "mc") return LdlrMethod::monte_carlo;
  fail(ErrorKind::invalid_parameter, "unknown ldlr method '" + s + "' (expected exact, brute, sequential, md or mc)");
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Enumeration limits. Checked before any work is done.
struct Budget {
  double enumeration = 1e7;  ///< count vectors / signal assignments
  double tuples = 1e9;       ///< (|F| n^2)^d for md_count
};

struct LdlrOptions {
  Arithmetic arithmetic = Arithmetic::floating;
  Budget budget;
};

struct MomentTable {
  int L = 0;
  int n = 0;
  std::vector<double> values;     ///< E[S_L^d], d = 0..D
  std::vector<Rational> exact;    ///< filled in rational mode
};

struct LdlrReport {
  LdlrMethod method = LdlrMethod::exact_multinomial;
  std::string model;
  int L = 0;
  int n = 0;
  double lambda = 0.0;
  int D = 0;
  Arithmetic arithmetic = Arithmetic::floating;
  std::vector<double> terms;
  std::vector<Rational> exact_terms;
  double cumulative = 0.0;
  std::optional<Rational> exact_cumulative;
  std::vector<double> term_stderr;       ///< Monte Carlo only
  std::optional<double> cumulative_stderr;

  std::vector<double> partial_sums() const {
    std::vector<double> out;
    KahanSum acc;
    for (double t : terms) {
      acc.add(t);
      out.push_back(acc.value());
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// S_L statistic

namespace detail {
inline std::int64_t checked_total(const std::vector<std::int64_t>& counts, std::optional<std::int64_t> n) {
  require(!counts.empty(), "s_stat needs at least one count");
  std::int64_t total = 0;
  for (auto c : counts) {
    require(c >= 0, "counts must be nonnegative");
    total += c;
  }
  if (n && *n != total)
    fail(ErrorKind::invalid_parameter,
         "counts sum to " + std::to_string(total) + " but n = " + std::to_string(*n));
  return total;
}
}  // namespace detail

/// 2 S_L = L sum n_l^2 - n^2, exact.
inline BigInt s_stat_twice(const std::vector<std::int64_t>& counts, std::optional<std::int64_t> n = {}) {
  const std::int64_t total = detail::checked_total(counts, n);
  BigInt sq = 0;
  for (auto c : counts) sq += BigInt(c) * c;
  return BigInt(static_cast<std::int64_t>(counts.size())) * sq - BigInt(total) * total;
}

inline Rational s_stat_exact(const std::vector<std::int64_t>& counts, std::optional<std::int64_t> n = {}) {
  return Rational(s_stat_twice(counts, n), 2);
}

/// S_L = (L/2) sum (n_l - n/L)^2, centred before squaring.
inline double s_stat(const std::vector<std::int64_t>& counts, std::optional<std::int64_t> n = {}) {
  const std::int64_t total = detail::checked_total(counts, n);
  const double L = static_cast<double>(counts.size());
  const double mean = static_cast<double>(total) / L;
  KahanSum acc;
  for (auto c : counts) {
    const double dev = static_cast<double>(c) - mean;
    acc.add(dev * dev);
  }
  return 0.5 * L * acc.value();
}

// ---------------------------------------------------------------------------
// Moment routes

inline double composition_count(int L, int n) {
  double c = 1.0;
  for (int i = 1; i < L; ++i) c = c * (n + i) / i;
  return c;
}

/// Visits every count vector (c_0..c_{L-1}) with sum n, in a fixed order.
template <class F>
void for_each_composition(int L, int n, F&& f) {
  std::vector<int> c(static_cast<std::size_t>(L), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == L - 1) {
      c[pos] = remaining;
      f(static_cast<const std::vector<int>&>(c));
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      c[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  rec(rec, 0, n);
}

namespace detail {

inline void check_ln(int L, int n, int D) {
  require(L >= 1, "L must be >= 1");
  require(n >= 1, "n must be >= 1");
  require(D >= 0, "D must be >= 0");
}

inline std::vector<double> log_factorials(int n) {
  std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
  return lf;
}

inline std::vector<BigInt> factorials(int n) {
  std::vector<BigInt> f(static_cast<std::size_t>(n) + 1, BigInt(1));
  for (int k = 1; k <= n; ++k) f[k] = f[k - 1] * k;
  return f;
}

inline void check_finite(const std::vector<double>& v, const std::string& where) {
  for (double x : v)
    if (!std::isfinite(x))
      fail(ErrorKind::numerical_overflow, where + ": non-finite value in float mode (try rational mode)");
}

inline MomentTable table_from_exact(int L, int n, std::vector<Rational> exact) {
  MomentTable t;
  t.L = L;
  t.n = n;
  for (const auto& e : exact) t.values.push_back(to_double(e));
  t.exact = std::move(exact);
  return t;
}

inline BigInt big_pow(const BigInt& base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace detail

/// E[S_L^d] by enumerating all count vectors under the multinomial(n, 1/L) law.
inline MomentTable moments_multinomial(int L, int n, int D, const LdlrOptions& opt = {}) {
  detail::check_ln(L, n, D);
  const double work = composition_count(L, n);
  if (work > opt.budget.enumeration)
    fail(ErrorKind::resource_limit, "multinomial enumeration needs " + std::to_string(work) +
                                        " count vectors, budget is " + std::to_string(opt.budget.enumeration));
  const auto size = static_cast<std::size_t>(D) + 1;

  if (opt.arithmetic == Arithmetic::rational) {
    const auto fact = detail::factorials(n);
    std::vector<BigInt> num(size, BigInt(0));
    for_each_composition(L, n, [&](const std::vector<int>& c) {
      BigInt w = fact[n];
      std::int64_t sq = 0;
      for (int x : c) {
        w /= fact[x];
        sq += static_cast<std::int64_t>(x) * x;
      }
      const BigInt two_s = BigInt(L) * sq - BigInt(n) * n;
      for (std::size_t d = 0; d < size; ++d) {
        num[d] += w;
        w *= two_s;
      }
    });
    const BigInt ln = detail::big_pow(BigInt(L), n);
    std::vector<Rational> exact;
    BigInt denom = ln;
    for (std::size_t d = 0; d < size; ++d) {
      exact.emplace_back(num[d], denom);
      denom *= 2;
    }
    return detail::table_from_exact(L, n, std::move(exact));
  }

  const auto lf = detail::log_factorials(n);
  const double log_norm = lf[n] - n * std::log(static_cast<double>(L));
  std::vector<KahanSum> acc(size);
  for_each_composition(L, n, [&](const std::vector<int>& c) {
    double logw = log_norm;
    std::int64_t sq = 0;
    for (int x : c) {
      logw -= lf[x];
      sq += static_cast<std::int64_t>(x) * x;
    }
    const double s = 0.5 * static_cast<double>(static_cast<std::int64_t>(L) * sq - static_cast<std::int64_t>(n) * n);
    double term = std::exp(logw);
    for (std::size_t d = 0; d < size; ++d) {
      acc[d].add(term);
      term *= s;
    }
  });
  MomentTable t;
  t.L = L;
  t.n = n;
  for (auto& a : acc) t.values.push_back(a.value());
  detail::check_finite(t.values, "moments_multinomial");
  return t;
}

/// E[S_L^d] by averaging over all L^n signal assignments. No multinomial
/// weights are used; this is the independent oracle for the routes above.
inline MomentTable moments_bruteforce(int L, int n, int D, const LdlrOptions& opt = {}) {
  detail::check_ln(L, n, D);
  const double work = std::pow(static_cast<double>(L), n);
  if (work > opt.budget.enumeration)
    fail(ErrorKind::resource_limit, "brute force needs L^n = " + std::to_string(work) +
                                        " assignments, budget is " + std::to_string(opt.budget.enumeration));
  // histogram of 2 S over all assignments
  std::map<std::int64_t, std::uint64_t> hist;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(L), 0);
  counts[0] = n;
  std::int64_t sq = static_cast<std::int64_t>(n) * n;
  const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
  while (true) {
    ++hist[L * sq - n2];
    int pos = 0;
    while (pos < n) {
      const int old = a[pos];
      const int next = (old + 1) % L;
      sq += -2 * counts[old] + 1;
      --counts[old];
      sq += 2 * counts[next] + 1;
      ++counts[next];
      a[pos] = next;
      if (next != 0) break;
      ++pos;
    }
    if (pos == n) break;
  }

  const auto size = static_cast<std::size_t>(D) + 1;
  if (opt.arithmetic == Arithmetic::rational) {
    std::vector<BigInt> num(size, BigInt(0));
    for (const auto& [two_s, mult] : hist) {
      BigInt p = mult;
      for (std::size_t d = 0; d < size; ++d) {
        num[d] += p;
        p *= two_s;
      }
    }
    std::vector<Rational> exact;
    BigInt denom = detail::big_pow(BigInt(L), n);
    for (std::size_t d = 0; d < size; ++d) {
      exact.emplace_back(num[d], denom);
      denom *= 2;
    }
    return detail::table_from_exact(L, n, std::move(exact));
  }
  std::vector<KahanSum> acc(size);
  for (const auto& [two_s, mult] : hist) {
    double p = static_cast<double>(mult) / work;
    for (std::size_t d = 0; d < size; ++d) {
      acc[d].add(p);
      p *= 0.5 * static_cast<double>(two_s);
    }
  }
  MomentTable t;
  t.L = L;
  t.n = n;
  for (auto& x : acc) t.values.push_back(x.value());
  detail::check_finite(t.values, "moments_bruteforce");
  return t;
}

namespace detail {

template <class T>
struct Scalar;

template <>
struct Scalar<double> {
  static double from_ratio(std::int64_t p, std::int64_t q) { return static_cast<double>(p) / static_cast<double>(q); }
  // pmf of Bin(r, 1/m) at c
  struct Binomial {
    std::vector<double> lf;
    explicit Binomial(int n) : lf(log_factorials(n)) {}
    double pmf(int r, int c, int m) const {
      if (m == 1) return c == r ? 1.0 : 0.0;
      return std::exp(lf[r] - lf[c] - lf[r - c] + (r - c) * std::log(m - 1.0) - r * std::log(static_cast<double>(m)));
    }
  };
};

template <>
struct Scalar<Rational> {
  static Rational from_ratio(std::int64_t p, std::int64_t q) { return Rational(p, q); }
  struct Binomial {
    std::vector<BigInt> fact;
    explicit Binomial(int n) : fact(factorials(n)) {}
    Rational pmf(int r, int c, int m) const {
      if (m == 1) return c == r ? Rational(1) : Rational(0);
      const BigInt choose = fact[r] / (fact[c] * fact[r - c]);
      return Rational(choose * big_pow(BigInt(m - 1), r - c), big_pow(BigInt(m), r));
    }
  };
};

}  // namespace detail

/// E[S_L^d] by revealing the counts one category at a time:
/// n_k | (remaining r) ~ Bin(r, 1/(L-k)). Carries E[P^j 1{remaining = r}]
/// for the partial sum P of squared deviations. All terms are nonnegative,
/// so there is no cancellation. Cost O(L n^2 D^2); used where the full
/// count-vector enumeration is out of budget.
template <class T>
std::vector<T> moments_sequential_t(int L, int n, int D) {
  detail::check_ln(L, n, D);
  using S = detail::Scalar<T>;
  const typename S::Binomial bin(n);
  const auto size = static_cast<std::size_t>(D) + 1;

  // dev2pow[c][m] = (c - n/L)^(2m)
  std::vector<std::vector<T>> dev2pow(static_cast<std::size_t>(n) + 1, std::vector<T>(size));
  for (int c = 0; c <= n; ++c) {
    const T dev = S::from_ratio(static_cast<std::int64_t>(c) * L - n, L);
    const T dev2 = dev * dev;
    T p = T(1);
    for (std::size_t m = 0; m < size; ++m) {
      dev2pow[c][m] = p;
      p = p * dev2;
    }
  }
  std::vector<std::vector<T>> choose(size, std::vector<T>(size, T(0)));
  for (std::size_t j = 0; j < size; ++j) {
    choose[j][0] = T(1);
    for (std::size_t i = 1; i <= j; ++i) choose[j][i] = choose[j - 1][i - 1] + (i < j ? choose[j - 1][i] : T(0));
  }

  std::vector<std::vector<T>> state(static_cast<std::size_t>(n) + 1, std::vector<T>(size, T(0)));
  std::vector<char> live(static_cast<std::size_t>(n) + 1, 0);
  state[n][0] = T(1);
  live[n] = 1;
  for (int k = 0; k + 1 < L; ++k) {
    std::vector<std::vector<T>> next(static_cast<std::size_t>(n) + 1, std::vector<T>(size, T(0)));
    std::vector<char> next_live(static_cast<std::size_t>(n) + 1, 0);
    for (int r = 0; r <= n; ++r) {
      if (!live[r]) continue;
      for (int c = 0; c <= r; ++c) {
        const T w = bin.pmf(r, c, L - k);
        auto& dst = next[r - c];
        next_live[r - c] = 1;
        for (std::size_t j = 0; j < size; ++j) {
          T acc = T(0);
          for (std::size_t i = 0; i <= j; ++i) acc = acc + choose[j][i] * state[r][i] * dev2pow[c][j - i];
          dst[j] = dst[j] + w * acc;
        }
      }
    }
    state = std::move(next);
    live = std::move(next_live);
  }
  // the last category takes whatever remains
  std::vector<T> out(size, T(0));
  const T half_l = S::from_ratio(L, 2);
  for (int r = 0; r <= n; ++r) {
    if (!live[r]) continue;
    for (std::size_t j = 0; j < size; ++j) {
      T acc = T(0);
      for (std::size_t i = 0; i <= j; ++i) acc = acc + choose[j][i] * state[r][i] * dev2pow[r][j - i];
      out[j] = out[j] + acc;
    }
  }
  T scale = T(1);
  for (std::size_t j = 0; j < size; ++j) {
    out[j] = out[j] * scale;
    scale = scale * half_l;
  }
  return out;
}

inline MomentTable moments_sequential(int L, int n, int D, Arithmetic arithmetic = Arithmetic::floating) {
  if (arithmetic == Arithmetic::rational)
    return detail::table_from_exact(L, n, moments_sequential_t<Rational>(L, n, D));
  MomentTable t;
  t.L = L;
  t.n = n;
  t.values = moments_sequential_t<double>(L, n, D);
  detail::check_finite(t.values, "moments_sequential");
  return t;
}

// ---------------------------------------------------------------------------
// LDLR from moments: t_d = lambda^{2d} / (n^d d!) E[S^d]

inline LdlrReport ldlr_from_moments(const MomentTable& m, double lambda, LdlrMethod method, Arithmetic arithmetic) {
  require(lambda >= 0.0, "lambda must be >= 0");
  LdlrReport r;
  r.method = method;
  r.model = "cyclic";
  r.L = m.L;
  r.n = m.n;
  r.lambda = lambda;
  r.D = static_cast<int>(m.values.size()) - 1;
  r.arithmetic = arithmetic;
  if (arithmetic == Arithmetic::rational && !m.exact.empty()) {
    const Rational l2 = Rational(lambda) * Rational(lambda);
    Rational coef = 1;
    Rational sum = 0;
    for (std::size_t d = 0; d < m.exact.size(); ++d) {
      if (d > 0) coef = coef * l2 / Rational(static_cast<std::int64_t>(m.n) * static_cast<std::int64_t>(d));
      const Rational t = coef * m.exact[d];
      r.exact_terms.push_back(t);
      r.terms.push_back(to_double(t));
      sum += t;
    }
    r.exact_cumulative = sum;
    r.cumulative = to_double(sum);
    return r;
  }
  const double l2 = lambda * lambda;
  double coef = 1.0;
  KahanSum sum;
  for (std::size_t d = 0; d < m.values.size(); ++d) {
    if (d > 0) coef *= l2 / (static_cast<double>(m.n) * static_cast<double>(d));
    const double t = d == 0 ? 1.0 : coef * m.values[d];  // E S^0 = 1 exactly
    r.terms.push_back(t);
    sum.add(t);
  }
  r.cumulative = sum.value();
  detail::check_finite(r.terms, "ldlr");
  return r;
}

inline LdlrReport ldlr_exact_multinomial(int L, int n, double lambda, int D, const LdlrOptions& opt = {}) {
  require(lambda >= 0.0, "lambda must be >= 0");
  return ldlr_from_moments(moments_multinomial(L, n, D, opt), lambda, LdlrMethod::exact_multinomial, opt.arithmetic);
}

inline LdlrReport ldlr_bruteforce_signals(int L, int n, double lambda, int D, const LdlrOptions& opt = {}) {
  require(lambda >= 0.0, "lambda must be >= 0");
  return ldlr_from_moments(moments_bruteforce(L, n, D, opt), lambda, LdlrMethod::brute_force, opt.arithmetic);
}

/// Finite-group form: the LDLR depends on the group only through its order.
inline LdlrReport ldlr_bruteforce_signals(const ModelSpec& model, int n, double lambda, int D,
                                          const LdlrOptions& opt = {}) {
  if (model.kind == ModelKind::circle)
    fail(ErrorKind::invalid_parameter, "brute-force enumeration needs a finite prior (cyclic or group)");
  auto r = ldlr_bruteforce_signals(model.L, n, lambda, D, opt);
  r.model = model.describe();
  return r;
}

inline LdlrReport ldlr_sequential(int L, int n, double lambda, int D, Arithmetic arithmetic = Arithmetic::floating) {
  return ldlr_from_moments(moments_sequential(L, n, D, arithmetic), lambda, LdlrMethod::sequential, arithmetic);
}

// ---------------------------------------------------------------------------
// Tuple counting

enum class MdPrior { circle, cyclic };

/// Frequency set and weight for the tuple-counting identity.
///  lemma:   l in 1..L, weight 1 for both priors (the set in which the circle
///           count is contained in the cyclic one).
///  model:   circle as in `lemma`; cyclic uses l in 1..L-1 with weight 1/2,
///           which is the beta-weighted LDLR of the cyclic model.
enum class MdForm { lemma, model };

inline std::vector<int> md_frequencies(MdPrior prior, int L, MdForm form) {
  std::vector<int> f;
  const int top = (prior == MdPrior::cyclic && form == MdForm::model) ? L - 1 : L;
  for (int l = 1; l <= top; ++l) f.push_back(l);
  return f;
}

/// |M_d|: number of (l_j, a_j, b_j)_{j<=d} with sum_j l_j (e_{a_j} - e_{b_j}) = 0
/// (exactly for the circle, modulo L for the cyclic prior).
inline std::uint64_t md_count(MdPrior prior, int L, int n, int d, const std::vector<int>& frequencies,
                              const Budget& budget = {}) {
  require(L >= 1 && n >= 1 && d >= 0, "md_count needs L >= 1, n >= 1, d >= 0");
  if (prior == MdPrior::cyclic) require(L >= 2, "cyclic prior needs L >= 2");
  const double work = std::pow(static_cast<double>(frequencies.size()) * n * n, d);
  if (work > budget.tuples)
    fail(ErrorKind::resource_limit,
         "md_count needs " + std::to_string(work) + " tuples, budget is " + std::to_string(budget.tuples));
  if (d == 0) return 1;
  std::vector<std::int64_t> k(static_cast<std::size_t>(n), 0);
  int nonzero = 0;
  const bool modular = prior == MdPrior::cyclic;
  auto is_zero = [&](std::int64_t v) { return modular ? v % L == 0 : v == 0; };
  auto bump = [&](int s, std::int64_t delta) {
    const bool before = is_zero(k[s]);
    k[s] += delta;
    const bool after = is_zero(k[s]);
    nonzero += static_cast<int>(before) - static_cast<int>(after);
  };
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == d) {
      if (nonzero == 0) ++count;
      return;
    }
    for (int l : frequencies)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          bump(a, l);
          bump(b, -l);
          self(self, depth + 1);
          bump(b, l);
          bump(a, -l);
        }
  };
  rec(rec, 0);
  return count;
}

inline std::uint64_t md_count(MdPrior prior, int L, int n, int d, MdForm form = MdForm::lemma,
                              const Budget& budget = {}) {
  return md_count(prior, L, n, d, md_frequencies(prior, L, form), budget);
}

/// t_d = lambda^{2d} / (n^d d!) * w^d |M_d|, w = 1/2 for the cyclic model form.
inline LdlrReport ldlr_from_md(MdPrior prior, int L, int n, double lambda, int D, MdForm form = MdForm::model,
                               const Budget& budget = {}) {
  require(lambda >= 0.0, "lambda must be >= 0");
  require(D >= 0, "D must be >= 0");
  const auto freqs = md_frequencies(prior, L, form);
  const Rational weight = (prior == MdPrior::cyclic && form == MdForm::model) ? Rational(1, 2) : Rational(1);
  const Rational l2 = Rational(lambda) * Rational(lambda);
  LdlrReport r;
  r.method = LdlrMethod::md_count;
  r.model = prior == MdPrior::circle ? "circle" : "cyclic";
  r.L = L;
  r.n = n;
  r.lambda = lambda;
  r.D = D;
  r.arithmetic = Arithmetic::rational;
  Rational coef = 1;
  Rational sum = 0;
  for (int d = 0; d <= D; ++d) {
    if (d > 0) coef = coef * l2 * weight / Rational(static_cast<std::int64_t>(n) * d);
    const Rational t = coef * Rational(BigInt(md_count(prior, L, n, d, freqs, budget)));
    r.exact_terms.push_back(t);
    r.terms.push_back(to_double(t));
    sum += t;
  }
  r.exact_cumulative = sum;
  r.cumulative = to_double(sum);
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo overlap

struct MonteCarloOptions {
  int samples = 10000;
  std::uint64_t seed = 0;
  int bootstrap = 200;
  bool paired = false;  ///< draw both x and x' instead of fixing x' = identity
};

/// sum_rho w_rho ||sum_g n_g rho(g)||_F^2 over nonredundant irreps.
inline double group_overlap_from_counts(const IrrepList& channels, const std::vector<std::int64_t>& counts) {
  double total = 0.0;
  for (const auto& rho : channels) {
    CMatrix acc = CMatrix::Zero(rho.complex_dim(), rho.complex_dim());
    for (std::size_t g = 0; g < counts.size(); ++g)
      if (counts[g] != 0) acc += static_cast<double>(counts[g]) * rho(static_cast<int>(g));
    total += rho.overlap_weight() * acc.squaredNorm();
  }
  return total;
}

/// sum over l = 1..floor(L/2) of w_l |sum_g n_g omega^{l g}|^2, w = 1/2 at l = L/2.
inline double cyclic_overlap_from_counts(int L, const std::vector<std::int64_t>& counts) {
  double total = 0.0;
  for (int l = 1; 2 * l <= L; ++l) {
    cplx acc = 0.0;
    for (int g = 0; g < L; ++g)
      if (counts[g] != 0) acc += static_cast<double>(counts[g]) * root_of_unity(L, static_cast<std::int64_t>(l) * g);
    total += (2 * l == L ? 0.5 : 1.0) * std::norm(acc);
  }
  return total;
}

inline LdlrReport ldlr_montecarlo_overlap(const ModelSpec& model, int n, double lambda, int D,
                                          const MonteCarloOptions& opt = {}) {
  require(n >= 1, "n must be >= 1");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(D >= 0, "D must be >= 0");
  require(opt.samples >= 100, "Monte Carlo needs at least 100 samples");
  require(opt.bootstrap >= 1, "bootstrap resamples must be >= 1");
  const auto size = static_cast<std::size_t>(D) + 1;
  const double scale = lambda * lambda / n;

  Rng rng(opt.seed, 0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(model.L));
  std::vector<double> phases(static_cast<std::size_t>(n));

  auto draw_element = [&]() {
    const int u = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(model.L)));
    if (!opt.paired) return u;
    const int v = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(model.L)));
    if (model.kind == ModelKind::group) return model.group.group(model.group.group.inverse(u), v);
    return (v - u + model.L) % model.L;
  };

  auto overlap = [&]() -> double {
    if (model.kind == ModelKind::circle) {
      for (auto& p : phases) {
        p = 2.0 * M_PI * rng.uniform();
        if (opt.paired) p -= 2.0 * M_PI * rng.uniform();
      }
      double total = 0.0;
      for (int l = 1; l <= model.L; ++l) {
        cplx acc = 0.0;
        for (double p : phases) acc += std::polar(1.0, l * p);
        total += std::norm(acc);
      }
      return total;
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (int j = 0; j < n; ++j) ++counts[draw_element()];
    if (model.kind == ModelKind::cyclic) return cyclic_overlap_from_counts(model.L, counts);
    return group_overlap_from_counts(model.channels, counts);
  };

  std::vector<KahanSum> sum(size), sum_sq(size);
  std::vector<double> per_sample(static_cast<std::size_t>(opt.samples));
  for (int s = 0; s < opt.samples; ++s) {
    const double x = scale * overlap();
    double v = 1.0;
    double f = 0.0;
    for (std::size_t d = 0; d < size; ++d) {
      if (d > 0) v *= x / static_cast<double>(d);
      if (!std::isfinite(v))
        fail(ErrorKind::numerical_overflow, "Monte Carlo term overflowed at degree " + std::to_string(d));
      sum[d].add(v);
      sum_sq[d].add(v * v);
      f += v;
    }
    per_sample[s] = f;
  }

  LdlrReport r;
  r.method = LdlrMethod::monte_carlo;
  r.model = model.describe();
  r.L = model.L;
  r.n = n;
  r.lambda = lambda;
  r.D = D;
  const double N = opt.samples;
  for (std::size_t d = 0; d < size; ++d) {
    const double mean = sum[d].value() / N;
    const double var = std::max(0.0, sum_sq[d].value() / N - mean * mean) * N / (N - 1.0);
    r.terms.push_back(mean);
    r.term_stderr.push_back(std::sqrt(var / N));
  }
  KahanSum total;
  for (double f : per_sample) total.add(f);
  r.cumulative = total.value() / N;

  Rng boot(opt.seed, 1);
  KahanSum bm, bm2;
  for (int b = 0; b < opt.bootstrap; ++b) {
    KahanSum acc;
    for (int s = 0; s < opt.samples; ++s) acc.add(per_sample[boot.uniform_index(per_sample.size())]);
    const double m = acc.value() / N;
    bm.add(m);
    bm2.add(m * m);
  }
  const double B = opt.bootstrap;
  const double bmean = bm.value() / B;
  r.cumulative_stderr = B > 1 ? std::sqrt(std::max(0.0, bm2.value() / B - bmean * bmean) * B / (B - 1.0)) : 0.0;
  return r;
}

}  // namespace gsynch
