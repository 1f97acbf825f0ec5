#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "csv.hpp"
#include "detect.hpp"
#include "group_io.hpp"
#include "ldlr.hpp"
#include "suites.hpp"

namespace gsynch {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_assertion = 1, exit_config = 2 };

// ---------------------------------------------------------------------------
// Analytic markers of the phase diagram

/// sqrt(2 (L-1) log(L-1) / (L (L-2))), defined for L >= 3.
inline double stat_lower_marker(int L) {
  require(L >= 3, "lower marker needs L >= 3");
  return std::sqrt(2.0 * (L - 1) * std::log(L - 1.0) / (static_cast<double>(L) * (L - 2)));
}

/// sqrt(4 log L / (L - 1)), defined for L >= 2.
inline double stat_upper_marker(int L) {
  require(L >= 2, "upper marker needs L >= 2");
  return std::sqrt(4.0 * std::log(static_cast<double>(L)) / (L - 1));
}

/// D = fixed value, or floor(n^c).
struct DRule {
  std::optional<int> fixed;
  double c = 0.3;

  int operator()(int n) const { return fixed ? *fixed : d_from_power_rule(n, c); }
  std::string describe() const { return fixed ? std::to_string(*fixed) : "n^" + format_number(c); }
};

// ---------------------------------------------------------------------------
// Config access with field paths

namespace cfg {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::config_error, path + ": " + what);
}

inline const json& at(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad(path + "." + key, "missing");
  return j.at(key);
}

inline std::int64_t integer(const json& j, const std::string& path) {
  if (j.is_number_integer() || j.is_number_unsigned()) return j.get<std::int64_t>();
  if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>()) return static_cast<std::int64_t>(j.get<double>());
  bad(path, "expected an integer");
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

inline bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected true or false");
  return j.get<bool>();
}

inline std::vector<int> int_list(const json& j, const std::string& path, std::int64_t min_value) {
  if (!j.is_array()) bad(path, "expected an array of integers");
  if (j.empty()) bad(path, "grid is empty");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = integer(j[i], path + "[" + std::to_string(i) + "]");
    if (v < min_value) bad(path + "[" + std::to_string(i) + "]", "must be >= " + std::to_string(min_value));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

inline std::vector<double> number_list(const json& j, const std::string& path, double min_value) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  if (j.empty()) bad(path, "grid is empty");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double v = number(j[i], path + "[" + std::to_string(i) + "]");
    if (v < min_value) bad(path + "[" + std::to_string(i) + "]", "must be >= " + format_number(min_value));
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::string> string_list(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of strings");
  if (j.empty()) bad(path, "grid is empty");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline DRule d_rule(const json& j, const std::string& path) {
  DRule r;
  if (j.is_number()) {
    const auto d = integer(j, path);
    if (d < 0) bad(path, "must be >= 0");
    r.fixed = static_cast<int>(d);
    return r;
  }
  if (j.is_object()) {
    r.c = number(at(j, "c", path), path + ".c");
    if (!(r.c > 0.0 && r.c < 1.0 / 3.0)) bad(path + ".c", "exponent must lie in (0, 1/3)");
    return r;
  }
  bad(path, "expected an integer or {\"c\": exponent}");
}

}  // namespace cfg

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {"ldlr-sweep", "power-sweep", "oracle-suite", "bound-suite",
                                                 "equivalence-suite"};
  return kinds;
}

/// Defaults per kind; a user config is merged on top.
inline json default_config(const std::string& kind) {
  json base = {{"kind", kind},
               {"seed", 1},
               {"budgets", {{"enumeration", 1e7}, {"tuples", 1e9}}},
               {"output", {{"csv", "results.csv"}, {"manifest", "manifest.json"}}}};
  if (kind == "ldlr-sweep") {
    base["grid"] = {{"model", "cyclic"}, {"L", {3}},          {"n", {10, 20, 40}}, {"lambda", {0.5, 0.9, 1.2}},
                    {"D", 4},            {"method", "exact"}, {"rational", false}, {"samples", 10000}};
  } else if (kind == "power-sweep") {
    base["grid"] = {{"model", "circle"}, {"L", {1}},           {"n", {500}},           {"lambda", {0.0, 0.5, 1.0, 1.5}},
                    {"trials", 100},     {"alpha", 0.05},      {"calibration_trials", 100}, {"tol", 1e-8}};
  } else if (kind == "oracle-suite") {
    base["grid"] = {
        {"exact_vs_brute", {{"L", {2, 3, 4}}, {"n_max", 10}, {"max_assignments", 1e5}, {"d_max", 4}, {"lambda", {0.5, 0.9, 1.5}}}},
        {"md", {{"L", {2, 3, 4}}, {"n_max", 5}, {"D", 3}, {"lambda", {0.7, 1.3}}}},
        {"first_moment", {{"L_max", 8}, {"n", {10, 100, 1000}}}},
        {"monte_carlo", {{"samples", 100000}}}};
  } else if (kind == "bound-suite") {
    base["grid"] = {
        {"polylog", {{"L", 3}, {"lambda", 0.9}, {"n", {50, 100, 200, 400}}, {"c", 0.3}, {"plateau_ratio", 1e-3}}},
        {"clt", {{"n", {1, 2, 5, 10, 50, 100, 500, 1000, 5000, 10000}}, {"alpha_max", 10}, {"alpha_step", 0.5},
                 {"rademacher", true}, {"bernoulli_p", {0.5, 1.0 / 3.0, 0.25, 0.2}}}},
        {"t_recursion", {{"L", {3, 4, 5}}, {"n", {1, 2, 3, 5, 8, 13, 20, 30}}, {"alpha_l1_max", 4},
                         {"gamma", {0, 0.5, 1, 1.5, 2}}}},
        {"l3", {{"n", 1000}, {"d_max", 9}}}};
  } else if (kind == "equivalence-suite") {
    base["grid"] = {
        {"indicator_signal", {{"groups", {"cyclic(3)", "cyclic(4)", "dihedral(3)"}}, {"n", {2, 7, 20}}, {"lambda", 1.3}}},
        {"indicator_noise", {{"groups", {"cyclic(3)", "cyclic(4)", "dihedral(3)"}}, {"n", 50}, {"replications", 200}}},
        {"coupled_samplers", {{"L", {2, 3, 4, 5, 6}}, {"n", 30}}},
        {"ensembles", {{"n", 1000}, {"trials", 50}, {"n_small", 60}}}};
  } else {
    cfg::bad("kind", "unknown experiment kind '" + kind + "'");
  }
  return base;
}

/// Environment overrides for enumeration budgets.
inline void apply_env_budgets(json& config) {
  if (const char* e = std::getenv("GSYNCH_ENUM_BUDGET")) {
    try {
      config["budgets"]["enumeration"] = std::stod(e);
    } catch (const std::exception&) {
      cfg::bad("GSYNCH_ENUM_BUDGET", "not a number");
    }
  }
  if (const char* t = std::getenv("GSYNCH_TUPLE_BUDGET")) {
    try {
      config["budgets"]["tuples"] = std::stod(t);
    } catch (const std::exception&) {
      cfg::bad("GSYNCH_TUPLE_BUDGET", "not a number");
    }
  }
}

/// Merges defaults, checks top-level fields, returns the resolved config.
inline json resolve_config(const json& user) {
  if (!user.is_object()) cfg::bad("<root>", "config must be a JSON object");
  const std::string kind = cfg::string(cfg::at(user, "kind", "<root>"), "kind");
  json resolved = default_config(kind);
  resolved.merge_patch(user);
  if (!user.contains("seed")) cfg::bad("seed", "missing (every experiment needs an explicit seed)");
  const auto seed = cfg::integer(resolved["seed"], "seed");
  if (seed < 0) cfg::bad("seed", "must be >= 0");
  for (const char* key : {"enumeration", "tuples"}) {
    const double b = cfg::number(cfg::at(resolved["budgets"], key, "budgets"), std::string("budgets.") + key);
    if (!(b > 0)) cfg::bad(std::string("budgets.") + key, "must be positive");
  }
  cfg::string(cfg::at(resolved["output"], "csv", "output"), "output.csv");
  if (!resolved.contains("grid") || !resolved["grid"].is_object()) cfg::bad("grid", "missing or not an object");
  return resolved;
}

inline std::string config_hash(const json& resolved) {
  json hashed = resolved;
  hashed.erase("output");
  return fnv1a_hex(hashed.dump());
}

inline Budget budget_of(const json& resolved) {
  Budget b;
  b.enumeration = resolved["budgets"]["enumeration"].get<double>();
  b.tuples = resolved["budgets"]["tuples"].get<double>();
  return b;
}

struct RunResult {
  Table table;
  json manifest;
  int exit_code = exit_ok;
};

namespace detail {

inline ModelSpec model_from_grid(const json& grid, int L) {
  const std::string model = cfg::string(cfg::at(grid, "model", "grid"), "grid.model");
  if (model == "circle") return ModelSpec::circle(L);
  if (model == "cyclic") return ModelSpec::cyclic(L);
  if (model == "group") return ModelSpec::finite_group(resolve_group(cfg::string(cfg::at(grid, "group", "grid"), "grid.group")));
  cfg::bad("grid.model", "expected circle, cyclic or group");
}

inline std::vector<int> l_grid(const json& grid) {
  if (grid.value("model", "") == "group") return {0};
  return cfg::int_list(cfg::at(grid, "L", "grid"), "grid.L", 1);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
};

inline RunResult run_ldlr_sweep(const json& config, json& timings) {
  const json& grid = config["grid"];
  const auto Ls = l_grid(grid);
  const auto ns = cfg::int_list(cfg::at(grid, "n", "grid"), "grid.n", 1);
  const auto lambdas = cfg::number_list(cfg::at(grid, "lambda", "grid"), "grid.lambda", 0.0);
  const DRule drule = cfg::d_rule(cfg::at(grid, "D", "grid"), "grid.D");
  const std::string method_name = cfg::string(cfg::at(grid, "method", "grid"), "grid.method");
  LdlrMethod method;
  try {
    method = ldlr_method_from_string(method_name);
  } catch (const Error& e) {
    cfg::bad("grid.method", e.what());
  }
  const bool rational = cfg::boolean(cfg::at(grid, "rational", "grid"), "grid.rational");
  const auto samples = cfg::integer(cfg::at(grid, "samples", "grid"), "grid.samples");
  if (method == LdlrMethod::monte_carlo && samples < 100) cfg::bad("grid.samples", "must be >= 100");
  const auto seed = config["seed"].get<std::uint64_t>();
  const Budget budget = budget_of(config);

  RunResult res;
  res.table.columns = {"model", "L", "n", "lambda", "D", "method", "arithmetic", "cumulative", "last_term", "stderr", "status"};
  std::size_t index = 0;
  json limits = json::array();
  for (int L0 : Ls)
    for (int n : ns)
      for (double lambda : lambdas) {
        const Timer timer;
        std::optional<ModelSpec> model;
        try {
          model = model_from_grid(grid, L0);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::config_error) throw;
          cfg::bad("grid", e.what());
        }
        const int L = model->L;
        const int D = drule(n);
        std::vector<std::string> row = {model->describe(), std::to_string(L), std::to_string(n), format_number(lambda),
                                        std::to_string(D), to_string(method), rational ? "rational" : "float"};
        try {
          LdlrOptions opt;
          opt.arithmetic = rational ? Arithmetic::rational : Arithmetic::floating;
          opt.budget = budget;
          LdlrReport r;
          switch (method) {
            case LdlrMethod::exact_multinomial:
              if (model->kind == ModelKind::circle) cfg::bad("grid.model", "exact route needs a finite prior");
              r = ldlr_exact_multinomial(L, n, lambda, D, opt);
              break;
            case LdlrMethod::brute_force: r = ldlr_bruteforce_signals(*model, n, lambda, D, opt); break;
            case LdlrMethod::sequential:
              if (model->kind == ModelKind::circle) cfg::bad("grid.model", "sequential route needs a finite prior");
              r = ldlr_sequential(L, n, lambda, D, opt.arithmetic);
              break;
            case LdlrMethod::md_count:
              if (model->kind == ModelKind::group) cfg::bad("grid.model", "md route supports circle and cyclic only");
              r = ldlr_from_md(model->kind == ModelKind::circle ? MdPrior::circle : MdPrior::cyclic, L, n, lambda, D,
                               MdForm::model, budget);
              break;
            case LdlrMethod::monte_carlo: {
              MonteCarloOptions mo;
              mo.samples = static_cast<int>(samples);
              mo.seed = derive_seed(seed, index);
              mo.paired = model->kind == ModelKind::group;
              r = ldlr_montecarlo_overlap(*model, n, lambda, D, mo);
              break;
            }
          }
          row.push_back(format_number(r.cumulative));
          row.push_back(format_number(r.terms.back()));
          row.push_back(r.cumulative_stderr ? format_number(*r.cumulative_stderr) : "");
          row.push_back("ok");
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::config_error) throw;
          row.insert(row.end(), {"", "", "", std::string(to_string(e.kind()))});
          limits.push_back({{"row", index}, {"error", to_string(e.kind())}, {"message", e.what()}});
          res.exit_code = exit_assertion;
        }
        res.table.add(std::move(row));
        timings.push_back({{"row", index}, {"seconds", timer.seconds()}});
        ++index;
      }
  res.manifest["errors"] = limits;
  res.manifest["partial"] = !limits.empty();
  return res;
}

inline RunResult run_power_sweep(const json& config, json& timings) {
  const json& grid = config["grid"];
  const auto Ls = l_grid(grid);
  const auto ns = cfg::int_list(cfg::at(grid, "n", "grid"), "grid.n", 1);
  const auto lambdas = cfg::number_list(cfg::at(grid, "lambda", "grid"), "grid.lambda", 0.0);
  const auto trials = cfg::integer(cfg::at(grid, "trials", "grid"), "grid.trials");
  if (trials < 1) cfg::bad("grid.trials", "must be >= 1");
  DetectorConfig dc;
  dc.alpha = cfg::number(cfg::at(grid, "alpha", "grid"), "grid.alpha");
  dc.calibration_trials = static_cast<int>(cfg::integer(cfg::at(grid, "calibration_trials", "grid"), "grid.calibration_trials"));
  dc.eigen.tol = cfg::number(cfg::at(grid, "tol", "grid"), "grid.tol");
  try {
    dc.validate();
  } catch (const Error& e) {
    cfg::bad("grid", e.what());
  }
  const auto seed = config["seed"].get<std::uint64_t>();
  RunResult res;
  res.table.columns = {"model", "L", "n", "lambda", "trials", "rejections", "power", "ci_low", "ci_high",
                       "type1", "mean_top", "threshold"};
  std::size_t point = 0;
  for (int L0 : Ls)
    for (int n : ns) {
      const Timer timer;
      const ModelSpec model = model_from_grid(grid, L0);
      const auto curve = power_curve(model, n, lambdas, static_cast<int>(trials), dc, derive_seed(seed, point));
      for (const auto& r : curve.rows)
        res.table.add({model.describe(), std::to_string(model.L), std::to_string(n), format_number(r.lambda),
                       std::to_string(r.trials), std::to_string(r.rejections), format_number(r.power),
                       format_number(r.ci.lower), format_number(r.ci.upper), format_number(r.type1),
                       format_number(r.mean_top), format_number(r.threshold)});
      timings.push_back({{"point", point}, {"seconds", timer.seconds()}});
      ++point;
    }
  return res;
}

template <class F>
void timed_group(std::vector<Check>& all, json& timings, const std::string& name, F&& f) {
  const Timer timer;
  auto checks = f();
  all.insert(all.end(), checks.begin(), checks.end());
  timings.push_back({{"group", name}, {"seconds", timer.seconds()}});
}

inline RunResult finish_suite(const std::vector<Check>& checks) {
  RunResult res;
  res.table = checks_table(checks);
  json failures = json::array();
  for (std::size_t i = 0; i < checks.size(); ++i)
    if (!checks[i].pass)
      failures.push_back({{"row", i}, {"check", checks[i].name}, {"params", checks[i].params}, {"note", checks[i].note}});
  res.manifest["failures"] = failures;
  res.manifest["checks"] = checks.size();
  res.exit_code = failures.empty() ? exit_ok : exit_assertion;
  return res;
}

inline RunResult run_oracle_suite(const json& config, json& timings) {
  const json& grid = config["grid"];
  const Budget budget = budget_of(config);
  const auto seed = config["seed"].get<std::uint64_t>();
  std::vector<Check> all;
  if (grid.contains("exact_vs_brute")) {
    const json& g = grid["exact_vs_brute"];
    const std::string p = "grid.exact_vs_brute";
    const auto Ls = cfg::int_list(cfg::at(g, "L", p), p + ".L", 1);
    const int n_max = static_cast<int>(cfg::integer(cfg::at(g, "n_max", p), p + ".n_max"));
    const double max_assign = cfg::number(cfg::at(g, "max_assignments", p), p + ".max_assignments");
    const int d_max = static_cast<int>(cfg::integer(cfg::at(g, "d_max", p), p + ".d_max"));
    const auto lambdas = cfg::number_list(cfg::at(g, "lambda", p), p + ".lambda", 0.0);
    timed_group(all, timings, "exact_vs_brute",
                [&] { return checks_exact_vs_brute(Ls, n_max, max_assign, d_max, lambdas, budget); });
  }
  if (grid.contains("md")) {
    const json& g = grid["md"];
    const std::string p = "grid.md";
    const auto Ls = cfg::int_list(cfg::at(g, "L", p), p + ".L", 2);
    const int n_max = static_cast<int>(cfg::integer(cfg::at(g, "n_max", p), p + ".n_max"));
    const int D = static_cast<int>(cfg::integer(cfg::at(g, "D", p), p + ".D"));
    const auto lambdas = cfg::number_list(cfg::at(g, "lambda", p), p + ".lambda", 0.0);
    timed_group(all, timings, "md", [&] { return checks_md(Ls, n_max, D, lambdas, budget); });
  }
  if (grid.contains("first_moment")) {
    const json& g = grid["first_moment"];
    const std::string p = "grid.first_moment";
    const int L_max = static_cast<int>(cfg::integer(cfg::at(g, "L_max", p), p + ".L_max"));
    const auto ns = cfg::int_list(cfg::at(g, "n", p), p + ".n", 1);
    timed_group(all, timings, "first_moment", [&] { return checks_first_moment(L_max, ns, budget); });
  }
  if (grid.contains("monte_carlo")) {
    const json& g = grid["monte_carlo"];
    const std::string p = "grid.monte_carlo";
    const auto samples = cfg::integer(cfg::at(g, "samples", p), p + ".samples");
    if (samples < 100) cfg::bad(p + ".samples", "must be >= 100");
    timed_group(all, timings, "monte_carlo",
                [&] { return checks_monte_carlo(static_cast<int>(samples), derive_seed(seed, 11), budget); });
  }
  return finish_suite(all);
}

inline RunResult run_bound_suite(const json& config, json& timings) {
  const json& grid = config["grid"];
  const Budget budget = budget_of(config);
  std::vector<Check> all;
  if (grid.contains("polylog")) {
    const json& g = grid["polylog"];
    const std::string p = "grid.polylog";
    const int L = static_cast<int>(cfg::integer(cfg::at(g, "L", p), p + ".L"));
    const double lambda = cfg::number(cfg::at(g, "lambda", p), p + ".lambda");
    const auto ns = cfg::int_list(cfg::at(g, "n", p), p + ".n", 1);
    const double c = cfg::number(cfg::at(g, "c", p), p + ".c");
    const double ratio = cfg::number(cfg::at(g, "plateau_ratio", p), p + ".plateau_ratio");
    timed_group(all, timings, "polylog", [&] { return checks_polylog(L, lambda, ns, c, budget, ratio); });
  }
  if (grid.contains("clt")) {
    const json& g = grid["clt"];
    const std::string p = "grid.clt";
    std::vector<Distribution> dists;
    if (cfg::boolean(cfg::at(g, "rademacher", p), p + ".rademacher")) dists.push_back(Distribution::rademacher());
    for (double q : cfg::number_list(cfg::at(g, "bernoulli_p", p), p + ".bernoulli_p", 0.0)) {
      if (!(q > 0 && q < 1)) cfg::bad(p + ".bernoulli_p", "entries must lie in (0,1)");
      dists.push_back(Distribution::bernoulli(q));
    }
    const auto ns = cfg::int_list(cfg::at(g, "n", p), p + ".n", 1);
    const double amax = cfg::number(cfg::at(g, "alpha_max", p), p + ".alpha_max");
    const double astep = cfg::number(cfg::at(g, "alpha_step", p), p + ".alpha_step");
    if (!(astep > 0)) cfg::bad(p + ".alpha_step", "must be positive");
    timed_group(all, timings, "clt", [&] { return checks_clt(dists, ns, amax, astep); });
  }
  if (grid.contains("t_recursion")) {
    const json& g = grid["t_recursion"];
    const std::string p = "grid.t_recursion";
    const auto Ls = cfg::int_list(cfg::at(g, "L", p), p + ".L", 3);
    const auto ns = cfg::int_list(cfg::at(g, "n", p), p + ".n", 1);
    const int l1 = static_cast<int>(cfg::integer(cfg::at(g, "alpha_l1_max", p), p + ".alpha_l1_max"));
    const auto gammas = cfg::number_list(cfg::at(g, "gamma", p), p + ".gamma", 0.0);
    timed_group(all, timings, "t_recursion", [&] { return checks_t_recursion(Ls, ns, l1, gammas, budget); });
  }
  if (grid.contains("l3")) {
    const json& g = grid["l3"];
    const std::string p = "grid.l3";
    const int n = static_cast<int>(cfg::integer(cfg::at(g, "n", p), p + ".n"));
    const int d_max = static_cast<int>(cfg::integer(cfg::at(g, "d_max", p), p + ".d_max"));
    timed_group(all, timings, "l3", [&] { return checks_l3(n, d_max, budget); });
  }
  return finish_suite(all);
}

inline RunResult run_equivalence_suite(const json& config, json& timings) {
  const json& grid = config["grid"];
  const auto seed = config["seed"].get<std::uint64_t>();
  std::vector<Check> all;
  if (grid.contains("indicator_signal")) {
    const json& g = grid["indicator_signal"];
    const std::string p = "grid.indicator_signal";
    const auto groups = cfg::string_list(cfg::at(g, "groups", p), p + ".groups");
    const auto ns = cfg::int_list(cfg::at(g, "n", p), p + ".n", 1);
    const double lambda = cfg::number(cfg::at(g, "lambda", p), p + ".lambda");
    timed_group(all, timings, "indicator_signal",
                [&] { return checks_indicator_signal(groups, ns, lambda, derive_seed(seed, 21)); });
  }
  if (grid.contains("indicator_noise")) {
    const json& g = grid["indicator_noise"];
    const std::string p = "grid.indicator_noise";
    const auto groups = cfg::string_list(cfg::at(g, "groups", p), p + ".groups");
    const int n = static_cast<int>(cfg::integer(cfg::at(g, "n", p), p + ".n"));
    const int reps = static_cast<int>(cfg::integer(cfg::at(g, "replications", p), p + ".replications"));
    timed_group(all, timings, "indicator_noise",
                [&] { return checks_indicator_noise(groups, n, reps, derive_seed(seed, 22)); });
  }
  if (grid.contains("coupled_samplers")) {
    const json& g = grid["coupled_samplers"];
    const std::string p = "grid.coupled_samplers";
    const auto Ls = cfg::int_list(cfg::at(g, "L", p), p + ".L", 2);
    const int n = static_cast<int>(cfg::integer(cfg::at(g, "n", p), p + ".n"));
    timed_group(all, timings, "coupled_samplers",
                [&] { return checks_coupled_samplers(Ls, n, derive_seed(seed, 23)); });
  }
  if (grid.contains("ensembles")) {
    const json& g = grid["ensembles"];
    const std::string p = "grid.ensembles";
    const int n = static_cast<int>(cfg::integer(cfg::at(g, "n", p), p + ".n"));
    const int trials = static_cast<int>(cfg::integer(cfg::at(g, "trials", p), p + ".trials"));
    const int n_small = static_cast<int>(cfg::integer(cfg::at(g, "n_small", p), p + ".n_small"));
    timed_group(all, timings, "ensembles", [&] { return checks_ensembles(n, trials, n_small, derive_seed(seed, 24)); });
  }
  return finish_suite(all);
}

inline json environment_info() {
  return {{"tool", "gsynch"},
          {"version", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION}};
}

/// Appends the reproducibility columns to every row.
inline void stamp(Table& t, const std::string& hash, std::uint64_t seed) {
  t.columns.push_back("config_hash");
  t.columns.push_back("seed");
  for (auto& r : t.rows) {
    r.push_back(hash);
    r.push_back(std::to_string(seed));
  }
}

}  // namespace detail

/// Runs one experiment. Does not write files; see `write_outputs`.
inline RunResult run(const json& user_config) {
  json config = resolve_config(user_config);
  const std::string kind = config["kind"];
  const std::string hash = config_hash(config);
  const auto seed = config["seed"].get<std::uint64_t>();
  json timings = json::array();
  const detail::Timer total;
  RunResult res;
  if (kind == "ldlr-sweep")
    res = detail::run_ldlr_sweep(config, timings);
  else if (kind == "power-sweep")
    res = detail::run_power_sweep(config, timings);
  else if (kind == "oracle-suite")
    res = detail::run_oracle_suite(config, timings);
  else if (kind == "bound-suite")
    res = detail::run_bound_suite(config, timings);
  else
    res = detail::run_equivalence_suite(config, timings);
  detail::stamp(res.table, hash, seed);
  json m = detail::environment_info();
  m["kind"] = kind;
  m["config"] = config;
  m["config_hash"] = hash;
  m["seed"] = seed;
  m["rows"] = res.table.rows.size();
  m["exit_code"] = res.exit_code;
  m["wall_time_seconds"] = total.seconds();
  m["timings"] = timings;
  m.update(res.manifest);
  res.manifest = m;
  return res;
}

inline void write_outputs(const RunResult& res, const std::string& csv_path, const std::string& manifest_path) {
  write_file_atomic(csv_path, res.table.to_csv());
  json m = res.manifest;
  m["csv"] = csv_path;
  if (!manifest_path.empty()) write_file_atomic(manifest_path, m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Phase diagram

struct PhaseDiagramOptions {
  std::vector<int> L;
  std::vector<double> lambda;
  std::vector<int> n;
  DRule d_rule;
  int trials = 0;  ///< detection trials per point; 0 skips the power columns
  DetectorConfig detector;
  std::uint64_t seed = 1;
  Budget budget;
};

/// Per (n, L, lambda): exact LDLR of the cyclic model, detection power and
/// the analytic markers. The LDLR uses count-vector enumeration when it fits
/// the budget and the sequential binomial route otherwise.
inline Table phase_diagram(const PhaseDiagramOptions& opt) {
  require(!opt.L.empty() && !opt.lambda.empty() && !opt.n.empty(), "phase diagram grids must be nonempty");
  for (int L : opt.L) require(L >= 2, "phase diagram needs L >= 2");
  if (opt.trials > 0) opt.detector.validate();
  Table t;
  t.columns = {"n", "L", "lambda", "D", "ldlr_method", "ldlr_cumulative", "power", "ci_low", "ci_high", "threshold",
               "stat_lb", "stat_ub", "lambda_comp"};
  std::size_t point = 0;
  for (int n : opt.n)
    for (int L : opt.L) {
      const int D = opt.d_rule(n);
      LdlrOptions lo;
      lo.budget = opt.budget;
      const bool enumerate = composition_count(L, n) <= opt.budget.enumeration;
      const MomentTable m = enumerate ? moments_multinomial(L, n, D, lo) : moments_sequential(L, n, D);
      const std::string method = enumerate ? "exact" : "sequential";
      std::optional<PowerCurve> curve;
      if (opt.trials > 0)
        curve = power_curve(ModelSpec::cyclic(L), n, opt.lambda, opt.trials, opt.detector, derive_seed(opt.seed, point));
      for (std::size_t i = 0; i < opt.lambda.size(); ++i) {
        const double lambda = opt.lambda[i];
        const auto r = ldlr_from_moments(m, lambda, LdlrMethod::exact_multinomial, Arithmetic::floating);
        std::vector<std::string> row = {std::to_string(n), std::to_string(L), format_number(lambda), std::to_string(D),
                                        method, format_number(r.cumulative)};
        if (curve) {
          const auto& pr = curve->rows[i];
          row.insert(row.end(), {format_number(pr.power), format_number(pr.ci.lower), format_number(pr.ci.upper),
                                 format_number(pr.threshold)});
        } else {
          row.insert(row.end(), {"", "", "", ""});
        }
        row.push_back(L >= 3 ? format_number(stat_lower_marker(L)) : "");
        row.push_back(format_number(stat_upper_marker(L)));
        row.push_back("1");
        t.add(std::move(row));
      }
      ++point;
    }
  return t;
}

}  // namespace gsynch
