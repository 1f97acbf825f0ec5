#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "csv.hpp"
#include "ensembles.hpp"
#include "group.hpp"
#include "ldlr.hpp"
#include "models.hpp"

namespace gsynch {

/// One assertion of a suite. `value` is compared against `reference`
/// by the rule that produced `pass`.
struct Check {
  std::string name;
  std::string params;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

inline bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

inline Table checks_table(const std::vector<Check>& checks) {
  Table t;
  t.columns = {"check", "params", "value", "reference", "tolerance", "pass", "note"};
  for (const auto& c : checks)
    t.add({c.name, c.params, format_number(c.value), format_number(c.reference), format_number(c.tolerance),
           c.pass ? "true" : "false", c.note});
  return t;
}

namespace detail {

struct Params {
  std::ostringstream os;
  template <class T>
  Params& operator()(const std::string& key, const T& v) {
    if (os.tellp() > 0) os << ';';
    os << key << '=';
    if constexpr (std::is_floating_point_v<T>)
      os << format_number(static_cast<double>(v));
    else
      os << v;
    return *this;
  }
  std::string str() const { return os.str(); }
};

/// Runs `body`; a thrown library error becomes a failed check.
inline void guarded(std::vector<Check>& out, const std::string& name, const std::string& params,
                    const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    Check c;
    c.name = name;
    c.params = params;
    c.value = std::nan("");
    c.reference = std::nan("");
    c.note = std::string(to_string(e.kind())) + ": " + e.what();
    out.push_back(c);
  }
}

inline double max_abs_diff(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const Rational d = a[i] - b[i];
    worst = std::max(worst, std::abs(to_double(d)));
  }
  if (a.size() != b.size()) worst = std::numeric_limits<double>::infinity();
  return worst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LDLR cross-checks

/// Multinomial enumeration against signal brute force, exact rationals.
inline std::vector<Check> checks_exact_vs_brute(const std::vector<int>& Ls, int n_max, double max_assignments,
                                                int d_max, const std::vector<double>& lambdas,
                                                const Budget& budget = {}) {
  std::vector<Check> out;
  LdlrOptions opt;
  opt.arithmetic = Arithmetic::rational;
  opt.budget = budget;
  for (int L : Ls)
    for (int n = 1; n <= n_max; ++n) {
      if (std::pow(static_cast<double>(L), n) > max_assignments) continue;
      const std::string p0 = detail::Params()("L", L)("n", n)("D", d_max).str();
      detail::guarded(out, "exact_vs_brute", p0, [&] {
        const auto a = moments_multinomial(L, n, d_max, opt);
        const auto b = moments_bruteforce(L, n, d_max, opt);
        for (double lambda : lambdas) {
          const auto ra = ldlr_from_moments(a, lambda, LdlrMethod::exact_multinomial, Arithmetic::rational);
          const auto rb = ldlr_from_moments(b, lambda, LdlrMethod::brute_force, Arithmetic::rational);
          Check c;
          c.name = "exact_vs_brute";
          c.params = detail::Params()("L", L)("n", n)("D", d_max)("lambda", lambda).str();
          c.value = detail::max_abs_diff(ra.exact_terms, rb.exact_terms);
          c.reference = 0.0;
          c.tolerance = 1e-12;
          c.pass = c.value <= c.tolerance && a.exact == b.exact;
          c.note = "cumulative=" + format_number(ra.cumulative);
          out.push_back(c);
        }
      });
    }
  return out;
}

/// Tuple counting against the multinomial route (cyclic model form), and
/// the containment |M_d(circle)| <= |M_d(cyclic)| on the common frequency set.
inline std::vector<Check> checks_md(const std::vector<int>& Ls, int n_max, int D, const std::vector<double>& lambdas,
                                    const Budget& budget = {}) {
  std::vector<Check> out;
  LdlrOptions opt;
  opt.arithmetic = Arithmetic::rational;
  opt.budget = budget;
  for (int L : Ls)
    for (int n = 1; n <= n_max; ++n) {
      const std::string p0 = detail::Params()("L", L)("n", n)("D", D).str();
      detail::guarded(out, "md_vs_multinomial", p0, [&] {
        for (double lambda : lambdas) {
          const auto md = ldlr_from_md(MdPrior::cyclic, L, n, lambda, D, MdForm::model, budget);
          const auto ex = ldlr_exact_multinomial(L, n, lambda, D, opt);
          Check c;
          c.name = "md_vs_multinomial";
          c.params = detail::Params()("L", L)("n", n)("D", D)("lambda", lambda).str();
          c.value = std::max(std::abs(to_double(*md.exact_cumulative - *ex.exact_cumulative)),
                             detail::max_abs_diff(md.exact_terms, ex.exact_terms));
          c.tolerance = 1e-9;
          c.pass = c.value <= c.tolerance;
          c.note = "md=" + format_number(md.cumulative) + " exact=" + format_number(ex.cumulative);
          out.push_back(c);
        }
      });
      detail::guarded(out, "md_containment", p0, [&] {
        for (int d = 0; d <= D; ++d) {
          const auto circle = md_count(MdPrior::circle, L, n, d, MdForm::lemma, budget);
          const auto cyclic = md_count(MdPrior::cyclic, L, n, d, MdForm::lemma, budget);
          Check c;
          c.name = "md_containment";
          c.params = detail::Params()("L", L)("n", n)("d", d).str();
          c.value = static_cast<double>(circle);
          c.reference = static_cast<double>(cyclic);
          c.pass = circle <= cyclic;
          out.push_back(c);
        }
      });
    }
  return out;
}

/// E S_L = n (L - 1) / 2. Enumeration where it fits the budget, otherwise the
/// sequential binomial route; rationals for n <= 100, compensated floats above.
inline std::vector<Check> checks_first_moment(int L_max, const std::vector<int>& ns, const Budget& budget = {},
                                              double rational_enumeration_limit = 2e5) {
  std::vector<Check> out;
  for (int L = 2; L <= L_max; ++L)
    for (int n : ns) {
      const bool rational = n <= 100;
      const double comps = composition_count(L, n);
      const bool enumerate = comps <= budget.enumeration && (!rational || comps <= rational_enumeration_limit);
      const std::string params = detail::Params()("L", L)("n", n).str();
      detail::guarded(out, "first_moment", params, [&] {
        const Rational expected(static_cast<std::int64_t>(n) * (L - 1), 2);
        Check c;
        c.name = "first_moment";
        c.params = params;
        c.reference = to_double(expected);
        c.note = std::string(enumerate ? "multinomial" : "sequential") + (rational ? "/rational" : "/float");
        if (rational) {
          LdlrOptions opt;
          opt.arithmetic = Arithmetic::rational;
          opt.budget = budget;
          const auto m = enumerate ? moments_multinomial(L, n, 1, opt) : moments_sequential(L, n, 1, Arithmetic::rational);
          c.value = to_double(m.exact[1]);
          c.tolerance = 0.0;
          c.pass = m.exact[1] == expected && m.exact[0] == 1;
        } else {
          LdlrOptions opt;
          opt.budget = budget;
          const auto m = enumerate ? moments_multinomial(L, n, 1, opt) : moments_sequential(L, n, 1);
          c.value = m.values[1];
          c.tolerance = 1e-9;
          c.pass = std::abs(c.value - c.reference) <= c.tolerance * c.reference && std::abs(m.values[0] - 1.0) <= 1e-9;
        }
        out.push_back(c);
      });
    }
  return out;
}

/// Monte Carlo overlap within 3 standard errors of an exact route.
inline std::vector<Check> checks_monte_carlo(int samples, std::uint64_t seed, const Budget& budget = {}) {
  std::vector<Check> out;
  struct Case {
    std::string label;
    ModelSpec model;
    int n;
    double lambda;
    int D;
    bool paired;
  };
  std::vector<Case> cases = {
      {"cyclic(3)", ModelSpec::cyclic(3), 20, 0.8, 3, false},
      {"circle(L=2)", ModelSpec::circle(2), 50, 0.5, 2, false},
      {"dihedral(3)", ModelSpec::finite_group(build_dihedral(3)), 10, 0.8, 3, false},
      {"quaternion8", ModelSpec::finite_group(build_quaternion8()), 10, 0.8, 3, true},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& k = cases[i];
    const std::string params =
        detail::Params()("model", k.label)("n", k.n)("lambda", k.lambda)("D", k.D)("samples", samples).str();
    detail::guarded(out, "mc_vs_exact", params, [&] {
      MonteCarloOptions mo;
      mo.samples = samples;
      mo.seed = derive_seed(seed, i);
      mo.paired = k.paired;
      const auto mc = ldlr_montecarlo_overlap(k.model, k.n, k.lambda, k.D, mo);
      double exact = 0.0;
      if (k.model.kind == ModelKind::circle) {
        exact = ldlr_from_md(MdPrior::circle, k.model.L, k.n, k.lambda, k.D, MdForm::model, budget).cumulative;
      } else {
        LdlrOptions opt;
        opt.budget = budget;
        exact = ldlr_exact_multinomial(k.model.L, k.n, k.lambda, k.D, opt).cumulative;
      }
      Check c;
      c.name = "mc_vs_exact";
      c.params = params;
      c.value = mc.cumulative;
      c.reference = exact;
      c.tolerance = 3.0 * mc.cumulative_stderr.value_or(0.0);
      c.pass = std::abs(c.value - c.reference) <= c.tolerance;
      c.note = "stderr=" + format_number(mc.cumulative_stderr.value_or(0.0));
      out.push_back(c);
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounds

inline int d_from_power_rule(int n, double c) {
  return static_cast<int>(std::floor(std::pow(static_cast<double>(n), c) + 1e-12));
}

/// Exact cumulative LDLR at D = floor(n^c) against Li_{-2L}(lambda^2), plus
/// the plateau criterion t_D < 1e-3 * cumulative.
inline std::vector<Check> checks_polylog(int L, double lambda, const std::vector<int>& ns, double c,
                                         const Budget& budget = {}, double plateau_ratio = 1e-3) {
  std::vector<Check> out;
  detail::guarded(out, "polylog_partial_sums", detail::Params()("L", L)("lambda", lambda).str(), [&] {
    const auto pb = bound_polylog(L, lambda, 200, true);
    bool monotone = true;
    for (std::size_t d = 1; d < pb.partial_sums.size(); ++d) monotone &= pb.partial_sums[d] >= pb.partial_sums[d - 1];
    Check ch;
    ch.name = "polylog_partial_sums";
    ch.params = detail::Params()("L", L)("lambda", lambda)("D", 200).str();
    ch.value = pb.partial;
    ch.reference = *pb.limit;
    ch.pass = monotone && pb.partial <= *pb.limit * (1 + 1e-12);
    ch.note = monotone ? "monotone" : "not monotone";
    out.push_back(ch);
  });
  for (int n : ns) {
    const int D = d_from_power_rule(n, c);
    const std::string params = detail::Params()("L", L)("n", n)("lambda", lambda)("D", D).str();
    detail::guarded(out, "polylog_bound", params, [&] {
      LdlrOptions opt;
      opt.arithmetic = Arithmetic::rational;
      opt.budget = budget;
      const auto r = ldlr_exact_multinomial(L, n, lambda, D, opt);
      const double limit = *bound_polylog(L, lambda, D, true).limit;
      Check b;
      b.name = "polylog_bound";
      b.params = params;
      b.value = r.cumulative;
      b.reference = limit;
      b.pass = r.cumulative <= limit;
      out.push_back(b);
      Check p;
      p.name = "plateau";
      p.params = params;
      p.value = r.terms.back() / r.cumulative;
      p.reference = plateau_ratio;
      p.pass = p.value < plateau_ratio;
      p.note = "last_term=" + format_number(r.terms.back()) + " cumulative=" + format_number(r.cumulative);
      out.push_back(p);
    });
  }
  return out;
}

inline std::vector<Check> checks_clt(const std::vector<Distribution>& dists, const std::vector<int>& ns,
                                     double alpha_max, double alpha_step) {
  std::vector<Check> out;
  const int steps = static_cast<int>(std::floor(alpha_max / alpha_step + 1e-9));
  for (const auto& dist : dists)
    for (int n : ns)
      for (int i = 0; i <= steps; ++i) {
        const double alpha = i * alpha_step;
        const std::string params = detail::Params()("dist", dist.describe())("n", n)("alpha", alpha).str();
        detail::guarded(out, "clt_moment", params, [&] {
          const auto r = check_clt_moment_bound(dist, n, alpha);
          Check c;
          c.name = "clt_moment";
          c.params = params;
          c.value = r.lhs;
          c.reference = r.rhs;
          c.pass = r.holds;
          out.push_back(c);
        });
      }
  return out;
}

/// Every integer alpha in N^k with |alpha|_1 <= alpha_l1_max, every gamma.
/// One row per (L, n, k) carrying the worst lhs/rhs ratio.
inline std::vector<Check> checks_t_recursion(const std::vector<int>& Ls, const std::vector<int>& ns, int alpha_l1_max,
                                             const std::vector<double>& gammas, const Budget& budget = {}) {
  std::vector<Check> out;
  for (int L : Ls)
    for (int n : ns)
      for (int k = 1; k < L; ++k) {
        const std::string params = detail::Params()("L", L)("n", n)("k", k).str();
        detail::guarded(out, "t_recursion", params, [&] {
          Check c;
          c.name = "t_recursion";
          c.params = params;
          c.reference = 1.0;
          c.pass = true;
          std::size_t cases = 0;
          std::vector<double> alpha(static_cast<std::size_t>(k), 0.0);
          auto rec = [&](auto&& self, int pos, int left) -> void {
            if (pos == k) {
              for (double g : gammas) {
                const auto r = check_t_recursion(L, n, k, alpha, g, budget);
                ++cases;
                if (r.worst_ratio > c.value || cases == 1) c.value = r.worst_ratio;
                if (!r.holds && c.pass) {
                  c.pass = false;
                  std::ostringstream w;
                  w << "violation alpha=(";
                  for (std::size_t i = 0; i < alpha.size(); ++i) w << (i ? "," : "") << alpha[i];
                  w << ") gamma=" << g << " tuple=(";
                  for (std::size_t i = 0; i < r.witness.size(); ++i) w << (i ? "," : "") << r.witness[i];
                  w << ") lhs=" << format_number(r.lhs_at_worst) << " rhs=" << format_number(r.rhs_at_worst);
                  c.note = w.str();
                }
              }
              return;
            }
            for (int v = 0; v <= left; ++v) {
              alpha[pos] = v;
              self(self, pos + 1, left - v);
            }
          };
          rec(rec, 0, alpha_l1_max);
          if (c.pass) c.note = "cases=" + std::to_string(cases);
          out.push_back(c);
        });
      }
  return out;
}

inline std::vector<Check> checks_l3(int n, int d_max, const Budget& budget = {}) {
  std::vector<Check> out;
  detail::guarded(out, "l3_moment", detail::Params()("n", n)("d_max", d_max).str(), [&] {
    LdlrOptions opt;
    opt.budget = budget;
    for (const auto& r : check_l3_moment_bound(n, d_max, opt)) {
      Check c;
      c.name = "l3_moment";
      c.params = detail::Params()("n", n)("d", r.d).str();
      c.value = r.moment;
      c.reference = r.bound;
      c.pass = r.holds;
      c.note = r.in_regime ? "" : "outside d^3 <= n";
      out.push_back(c);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Model and ensemble equivalences

/// Noise-free indicators with gamma = lambda sqrt(L/n) map onto
/// (lambda/n) rho(g_k) rho(g_j)^{-1}; cross-irrep blocks carry nothing.
inline std::vector<Check> checks_indicator_signal(const std::vector<std::string>& groups, const std::vector<int>& ns,
                                                  double lambda, std::uint64_t seed) {
  std::vector<Check> out;
  for (const auto& name : groups)
    for (int n : ns) {
      const std::string params = detail::Params()("group", name)("n", n)("lambda", lambda).str();
      detail::guarded(out, "indicator_signal", params, [&] {
        const auto g = build_catalog(name);
        const int L = g.group.order();
        SamplerOptions so;
        so.noise = false;
        const double gamma = lambda * std::sqrt(static_cast<double>(L) / n);
        const auto obs = sample_indicator(g.group, n, gamma, derive_seed(seed, n), so);
        const auto canon = indicator_to_canonical(obs, g.group, g.full);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.full.size(); ++i) {
          const CMatrix x = stacked_representation(g.full[i], obs.truth);
          const CMatrix expected = (lambda / n) * x * x.adjoint();
          worst = std::max(worst, (canon.frequencies[i].y - expected).cwiseAbs().maxCoeff());
        }
        Check c;
        c.name = "indicator_signal";
        c.params = params;
        c.value = worst;
        c.tolerance = 1e-10;
        c.pass = worst <= c.tolerance;
        out.push_back(c);

        // off-diagonal blocks of U Y~ U*
        const CMatrix u = regular_rep_unitary(g.group, g.full);
        const auto dims = regular_block_dims(g.full);
        double off = 0.0;
        for (int k = 0; k < std::min(n, 3); ++k)
          for (int j = 0; j < std::min(n, 3); ++j) {
            CMatrix m = indicator_pair_transform(obs, g.group, u, k, j);
            Eigen::Index pos = 0;
            for (int d : dims) {
              m.block(pos, pos, d, d).setZero();
              pos += d;
            }
            off = std::max(off, m.cwiseAbs().maxCoeff());
          }
        Check b;
        b.name = "indicator_offdiagonal";
        b.params = params;
        b.value = off;
        b.tolerance = 1e-10;
        b.pass = off <= b.tolerance;
        out.push_back(b);
      });
    }
  return out;
}

/// gamma = 0: mean |entry|^2 of off-diagonal pair blocks against 1/(n d).
inline std::vector<Check> checks_indicator_noise(const std::vector<std::string>& groups, int n, int replications,
                                                 std::uint64_t seed, double rel_tol = 0.05) {
  std::vector<Check> out;
  for (const auto& name : groups) {
    const std::string params = detail::Params()("group", name)("n", n)("replications", replications).str();
    detail::guarded(out, "indicator_noise", params, [&] {
      const auto g = build_catalog(name);
      std::vector<KahanSum> sum(g.full.size());
      std::vector<double> count(g.full.size(), 0.0);
      SamplerOptions so;
      so.signal = false;
      for (int r = 0; r < replications; ++r) {
        const auto obs = sample_indicator(g.group, n, 0.0, derive_seed(seed, r), so);
        const auto canon = indicator_to_canonical(obs, g.group, g.full);
        for (std::size_t i = 0; i < g.full.size(); ++i) {
          const int d = g.full[i].complex_dim();
          const CMatrix& y = canon.frequencies[i].y;
          for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
              if (k == j) continue;
              sum[i].add(y.block(static_cast<Eigen::Index>(k) * d, static_cast<Eigen::Index>(j) * d, d, d).squaredNorm());
              count[i] += static_cast<double>(d) * d;
            }
        }
      }
      for (std::size_t i = 0; i < g.full.size(); ++i) {
        Check c;
        c.name = "indicator_noise";
        c.params = params + ";irrep=" + g.full[i].label();
        c.value = sum[i].value() / count[i];
        c.reference = 1.0 / (static_cast<double>(n) * g.full[i].complex_dim());
        c.tolerance = rel_tol;
        c.pass = std::abs(c.value / c.reference - 1.0) <= rel_tol;
        out.push_back(c);
      }
    });
  }
  return out;
}

/// Same seed => cyclic and group(Z_L) samplers produce identical matrices.
inline std::vector<Check> checks_coupled_samplers(const std::vector<int>& Ls, int n, std::uint64_t seed) {
  std::vector<Check> out;
  for (int L : Ls) {
    const std::string params = detail::Params()("L", L)("n", n).str();
    detail::guarded(out, "coupled_samplers", params, [&] {
      const auto g = build_cyclic(L);
      const auto a = sample_gsynch_cyclic(L, {1.2}, n, seed);
      const auto b = sample_gsynch_group(g.group, g.nonredundant(), {1.2}, n, seed);
      Check c;
      c.name = "coupled_samplers";
      c.params = params;
      c.reference = 0.0;
      c.tolerance = 1e-12;
      if (a.frequencies.size() != b.frequencies.size()) {
        c.value = std::numeric_limits<double>::infinity();
        c.note = "frequency counts differ";
      } else {
        for (std::size_t i = 0; i < a.frequencies.size(); ++i) {
          c.value = std::max(c.value, (a.frequencies[i].y - b.frequencies[i].y).cwiseAbs().maxCoeff());
          if (a.frequencies[i].noise != b.frequencies[i].noise) c.note = "noise ensembles differ";
        }
      }
      c.pass = c.value <= c.tolerance && c.note.empty();
      out.push_back(c);
    });
  }
  return out;
}

/// Exact Hermiticity, GSE Kramers pairs, semicircle edge.
inline std::vector<Check> checks_ensembles(int n_edge, int trials, int n_small, std::uint64_t seed,
                                           double edge_tol = 0.06) {
  std::vector<Check> out;
  const Ensemble all[] = {Ensemble::GOE, Ensemble::GUE, Ensemble::GSE};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string params = detail::Params()("ensemble", to_string(all[i]))("n", n_small).str();
    detail::guarded(out, "hermitian", params, [&] {
      const auto w = sample({all[i], n_small}, derive_seed(seed, i));
      Check c;
      c.name = "hermitian";
      c.params = params;
      c.value = hermitian_defect(w.entries);
      c.pass = c.value == 0.0;
      out.push_back(c);
    });
  }
  {
    const std::string params = detail::Params()("ensemble", "GSE")("n", n_small).str();
    detail::guarded(out, "kramers", params, [&] {
      const auto w = sample({Ensemble::GSE, n_small}, derive_seed(seed, 7));
      const RVector ev = hermitian_eigenvalues(w.entries);
      double worst = 0.0;
      for (Eigen::Index k = 0; k + 1 < ev.size(); k += 2) worst = std::max(worst, std::abs(ev(k + 1) - ev(k)));
      Check c;
      c.name = "kramers";
      c.params = params;
      c.value = worst;
      c.tolerance = 1e-8;
      c.pass = worst <= c.tolerance;
      out.push_back(c);
    });
  }
  for (Ensemble e : {Ensemble::GOE, Ensemble::GUE}) {
    const std::string params = detail::Params()("ensemble", to_string(e))("n", n_edge)("trials", trials).str();
    detail::guarded(out, "semicircle_edge", params, [&] {
      const auto est = spectral_edge_check(e, n_edge, trials, derive_seed(seed, 100 + static_cast<int>(e)));
      Check c;
      c.name = "semicircle_edge";
      c.params = params;
      c.value = est.mean;
      c.reference = 2.0;
      c.tolerance = edge_tol;
      c.pass = std::abs(est.mean - 2.0) <= edge_tol;
      c.note = "stderr=" + format_number(est.std_error);
      out.push_back(c);
    });
  }
  return out;
}

}  // namespace gsynch
