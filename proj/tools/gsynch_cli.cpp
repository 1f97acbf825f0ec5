// Command line front end for the gsynch library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsynch/bounds.hpp"
#include "gsynch/detect.hpp"
#include "gsynch/ensembles.hpp"
#include "gsynch/experiments.hpp"
#include "gsynch/group_io.hpp"
#include "gsynch/ldlr.hpp"
#include "gsynch/observation_io.hpp"

using namespace gsynch;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::config_error, what + ": '" + s + "' is not a number");
  }
}

/// "a:b:step" (inclusive) or "x,y,z".
std::vector<double> parse_grid(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) fail(ErrorKind::config_error, what + ": expected a:b:step");
    const double a = parse_double(parts[0], what), b = parse_double(parts[1], what), step = parse_double(parts[2], what);
    if (!(step > 0) || b < a) fail(ErrorKind::config_error, what + ": need step > 0 and b >= a");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + i * step);
  } else {
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p, what));
  }
  if (out.empty()) fail(ErrorKind::config_error, what + ": grid is empty");
  return out;
}

std::vector<int> parse_int_grid(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (double v : parse_grid(s, what)) {
    if (std::floor(v) != v) fail(ErrorKind::config_error, what + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

ModelSpec make_model(const std::string& model, int L, const std::string& group) {
  if (model == "circle") return ModelSpec::circle(L);
  if (model == "cyclic") return ModelSpec::cyclic(L);
  if (model == "group") {
    if (group.empty()) fail(ErrorKind::config_error, "--group is required for the group model");
    return ModelSpec::finite_group(resolve_group(group));
  }
  fail(ErrorKind::config_error, "--model must be circle, cyclic or group");
}

Budget env_budget() {
  json j = {{"budgets", {{"enumeration", 1e7}, {"tuples", 1e9}}}};
  apply_env_budgets(j);
  return budget_of(j);
}

json report_json(const LdlrReport& r) {
  json j = {{"params",
             {{"model", r.model}, {"L", r.L}, {"n", r.n}, {"lambda", r.lambda}, {"D", r.D},
              {"method", to_string(r.method)},
              {"arithmetic", r.arithmetic == Arithmetic::rational ? "rational" : "float"}}},
            {"terms", r.terms},
            {"cumulative", r.cumulative}};
  if (!r.exact_terms.empty()) {
    json ex = json::array();
    for (const auto& t : r.exact_terms) ex.push_back(t.str());
    j["exact_terms"] = ex;
    j["exact_cumulative"] = r.exact_cumulative->str();
  }
  if (r.cumulative_stderr) {
    j["stderr"] = *r.cumulative_stderr;
    j["term_stderr"] = r.term_stderr;
  }
  return j;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file_atomic(path, text);
}

/// Re-creates the null model an observation was drawn from.
ModelSpec model_of(const SynchObservation& obs, const std::string& group_override) {
  if (obs.model == "circle") return ModelSpec::circle(static_cast<int>(obs.frequencies.size()));
  if (obs.model == "cyclic") return ModelSpec::cyclic(build_catalog(obs.group).group.order());
  const std::string g = group_override.empty() ? obs.group : group_override;
  return ModelSpec::finite_group(resolve_group(g));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-frequency group synchronisation: sampling, low-degree analysis, spectral detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw one observation from a synchronisation model");
  std::string sim_model = "cyclic", sim_group, sim_lambda = "1.0", sim_out = "-";
  int sim_L = 3, sim_n = 100;
  std::uint64_t sim_seed = 1;
  bool sim_binary = false, sim_no_noise = false, sim_no_signal = false;
  sim->add_option("--model", sim_model, "circle | cyclic | group")->check(CLI::IsMember({"circle", "cyclic", "group"}));
  sim->add_option("--group", sim_group, "catalog name (cyclic(L), dihedral(m), quaternion8) or .json file");
  sim->add_option("--L", sim_L, "frequencies (circle) or group order (cyclic)");
  sim->add_option("--n", sim_n, "signal length")->check(CLI::PositiveNumber);
  sim->add_option("--lambda", sim_lambda, "comma-separated signal strengths, one per frequency or a single value");
  sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out, "output path ('-' for stdout, JSON only)");
  sim->add_flag("--binary", sim_binary, "JSON header line plus column-major complex128 payload");
  sim->add_flag("--no-noise", sim_no_noise);
  sim->add_flag("--no-signal", sim_no_signal);

  // sample-ensemble
  auto* ens = app.add_subcommand("sample-ensemble", "Draw a GOE/GUE/GSE matrix or estimate its spectral edge");
  std::string ens_tag = "GUE", ens_out = "-";
  int ens_n = 100, ens_edge_trials = 0;
  std::uint64_t ens_seed = 1;
  ens->add_option("--ensemble", ens_tag)->check(CLI::IsMember({"GOE", "GUE", "GSE"}));
  ens->add_option("--n", ens_n)->check(CLI::PositiveNumber);
  ens->add_option("--seed", ens_seed);
  ens->add_option("--out", ens_out);
  ens->add_option("--edge-trials", ens_edge_trials, "report mean lambda_max/sqrt(n) over this many draws instead");

  // ldlr
  auto* ld = app.add_subcommand("ldlr", "Low-degree likelihood ratio norm");
  std::string ld_method = "exact", ld_model = "cyclic", ld_group, ld_csv;
  int ld_L = 3, ld_n = 10, ld_D = 3, ld_samples = 10000;
  double ld_lambda = 0.9;
  std::uint64_t ld_seed = 1;
  bool ld_rational = false, ld_paired = false;
  ld->add_option("--method", ld_method)->check(CLI::IsMember({"exact", "brute", "sequential", "md", "mc"}));
  ld->add_option("--model", ld_model)->check(CLI::IsMember({"circle", "cyclic", "group"}));
  ld->add_option("--group", ld_group);
  ld->add_option("--L", ld_L);
  ld->add_option("--n", ld_n)->check(CLI::PositiveNumber);
  ld->add_option("--lambda", ld_lambda)->check(CLI::NonNegativeNumber);
  ld->add_option("--D", ld_D)->check(CLI::NonNegativeNumber);
  ld->add_flag("--rational", ld_rational, "exact rational arithmetic");
  ld->add_option("--samples", ld_samples);
  ld->add_option("--seed", ld_seed);
  ld->add_flag("--paired", ld_paired, "Monte Carlo: draw both signals instead of using the identity reduction");
  ld->add_option("--csv", ld_csv, "also write the term table as CSV");

  // detect
  auto* det = app.add_subcommand("detect", "PCA test on a stored observation");
  std::string det_in, det_group;
  double det_alpha = 0.05;
  int det_calib = 200;
  std::uint64_t det_seed = 1;
  det->add_option("--in", det_in, "observation file")->required();
  det->add_option("--alpha", det_alpha);
  det->add_option("--calib-trials", det_calib);
  det->add_option("--seed", det_seed);
  det->add_option("--group", det_group, "group for file-based group observations");

  // power
  auto* pow_cmd = app.add_subcommand("power", "Empirical power curve of the PCA test");
  std::string pw_model = "circle", pw_group, pw_grid = "0:1.5:0.25", pw_out = "-";
  int pw_L = 1, pw_n = 500, pw_trials = 100, pw_calib = 100;
  double pw_alpha = 0.05;
  std::uint64_t pw_seed = 1;
  pow_cmd->add_option("--model", pw_model)->check(CLI::IsMember({"circle", "cyclic", "group"}));
  pow_cmd->add_option("--group", pw_group);
  pow_cmd->add_option("--L", pw_L);
  pow_cmd->add_option("--n", pw_n)->check(CLI::PositiveNumber);
  pow_cmd->add_option("--lambda-grid", pw_grid, "a:b:step or comma list");
  pow_cmd->add_option("--trials", pw_trials);
  pow_cmd->add_option("--alpha", pw_alpha);
  pow_cmd->add_option("--calib-trials", pw_calib);
  pow_cmd->add_option("--seed", pw_seed);
  pow_cmd->add_option("--out", pw_out);

  // md-count
  auto* md = app.add_subcommand("md-count", "Count tuples in M_d");
  std::string md_prior = "cyclic", md_form = "lemma";
  int md_L = 3, md_n = 3, md_d = 2;
  md->add_option("--prior", md_prior)->check(CLI::IsMember({"circle", "cyclic"}));
  md->add_option("--form", md_form, "lemma: l in 1..L; model: cyclic uses 1..L-1")->check(CLI::IsMember({"lemma", "model"}));
  md->add_option("--L", md_L);
  md->add_option("--n", md_n);
  md->add_option("--d", md_d);

  // bounds
  auto* bd = app.add_subcommand("bounds", "Evaluate one of the bound checks");
  std::string bd_which = "polylog", bd_dist = "rademacher", bd_alpha_vec = "1,1";
  int bd_L = 3, bd_D = 10, bd_n = 100, bd_k = 1, bd_dmax = 9;
  double bd_lambda = 0.9, bd_alpha = 1.0, bd_p = 0.5, bd_gamma = 0.0;
  bd->add_option("which", bd_which, "polylog | clt | trec | l3")->check(CLI::IsMember({"polylog", "clt", "trec", "l3"}));
  bd->add_option("--L", bd_L);
  bd->add_option("--lambda", bd_lambda);
  bd->add_option("--D", bd_D);
  bd->add_option("--dist", bd_dist)->check(CLI::IsMember({"rademacher", "bernoulli"}));
  bd->add_option("--p", bd_p);
  bd->add_option("--n", bd_n);
  bd->add_option("--alpha", bd_alpha, "moment order (clt)");
  bd->add_option("--k", bd_k);
  bd->add_option("--alpha-vec", bd_alpha_vec, "comma list of k exponents (trec)");
  bd->add_option("--gamma", bd_gamma);
  bd->add_option("--d-max", bd_dmax);
  bool bd_limit = false;
  bd->add_flag("--limit", bd_limit, "polylog: also sum the series limit (default when lambda < 1)");

  // suite
  auto* su = app.add_subcommand("suite", "Run an experiment config (sweeps and check suites)");
  std::string su_config, su_kind, su_out, su_manifest;
  std::vector<std::string> su_set;
  std::uint64_t su_seed = 0;
  auto* su_seed_opt = su->add_option("--seed", su_seed, "override config seed");
  su->add_option("--config", su_config, "JSON config file");
  su->add_option("--kind", su_kind, "experiment kind when no config file is given");
  su->add_option("--out", su_out, "override output.csv");
  su->add_option("--manifest", su_manifest, "override output.manifest");
  su->add_option("--set", su_set, "override a field: dotted.path=<json value>");

  // phase-diagram
  auto* ph = app.add_subcommand("phase-diagram", "LDLR, detection power and analytic markers over (L, lambda)");
  std::string ph_L = "2:12:1", ph_lambda = "0.5:1.5:0.1", ph_n = "500", ph_drule = "0.3", ph_out = "-", ph_manifest;
  int ph_trials = 0, ph_calib = 100;
  double ph_alpha = 0.05;
  std::uint64_t ph_seed = 1;
  ph->add_option("--L-grid", ph_L);
  ph->add_option("--lambda-grid", ph_lambda);
  ph->add_option("--n", ph_n, "one or more n (comma list)");
  ph->add_option("--D-rule", ph_drule, "exponent c for D = floor(n^c), or fixed:D");
  ph->add_option("--trials", ph_trials, "detection trials per point (0 skips power)");
  ph->add_option("--calib-trials", ph_calib);
  ph->add_option("--alpha", ph_alpha);
  ph->add_option("--seed", ph_seed);
  ph->add_option("--out", ph_out);
  ph->add_option("--manifest", ph_manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*sim) {
      std::vector<double> lambdas;
      for (const auto& p : split(sim_lambda, ',')) lambdas.push_back(parse_double(p, "--lambda"));
      SamplerOptions so;
      so.noise = !sim_no_noise;
      so.signal = !sim_no_signal;
      const auto obs = sample_observation(make_model(sim_model, sim_L, sim_group), lambdas, sim_n, sim_seed, so);
      if (sim_out == "-") {
        if (sim_binary) fail(ErrorKind::config_error, "--binary needs --out <path>");
        std::cout << observation_to_json(obs).dump() << "\n";
      } else {
        save_observation(sim_out, obs, sim_binary);
      }
      return exit_ok;
    }

    if (*ens) {
      const Ensemble tag = ensemble_from_string(ens_tag);
      if (ens_edge_trials > 0) {
        const auto est = spectral_edge_check(tag, ens_n, ens_edge_trials, ens_seed);
        emit(json{{"ensemble", ens_tag}, {"n", ens_n}, {"trials", est.trials}, {"mean", est.mean}, {"stderr", est.std_error}}
                     .dump(2) +
                 "\n",
             ens_out);
      } else {
        const auto w = sample({tag, ens_n}, ens_seed);
        json j = {{"ensemble", ens_tag}, {"n", ens_n}, {"seed", ens_seed}, {"matrix", matrix_to_json(w.entries)}};
        emit(j.dump() + "\n", ens_out);
      }
      return exit_ok;
    }

    if (*ld) {
      const Budget budget = env_budget();
      LdlrOptions opt;
      opt.arithmetic = ld_rational ? Arithmetic::rational : Arithmetic::floating;
      opt.budget = budget;
      const ModelSpec model = make_model(ld_model, ld_L, ld_group);
      const LdlrMethod method = ldlr_method_from_string(ld_method);
      if (model.kind == ModelKind::circle && method != LdlrMethod::md_count && method != LdlrMethod::monte_carlo)
        fail(ErrorKind::config_error, "the circle prior supports --method md or mc");
      LdlrReport r;
      switch (method) {
        case LdlrMethod::exact_multinomial: r = ldlr_exact_multinomial(model.L, ld_n, ld_lambda, ld_D, opt); break;
        case LdlrMethod::brute_force: r = ldlr_bruteforce_signals(model, ld_n, ld_lambda, ld_D, opt); break;
        case LdlrMethod::sequential: r = ldlr_sequential(model.L, ld_n, ld_lambda, ld_D, opt.arithmetic); break;
        case LdlrMethod::md_count:
          if (model.kind == ModelKind::group) fail(ErrorKind::config_error, "md supports circle and cyclic only");
          r = ldlr_from_md(model.kind == ModelKind::circle ? MdPrior::circle : MdPrior::cyclic, model.L, ld_n, ld_lambda,
                           ld_D, MdForm::model, budget);
          break;
        case LdlrMethod::monte_carlo: {
          MonteCarloOptions mo;
          mo.samples = ld_samples;
          mo.seed = ld_seed;
          mo.paired = ld_paired;
          r = ldlr_montecarlo_overlap(model, ld_n, ld_lambda, ld_D, mo);
          break;
        }
      }
      r.model = model.describe();
      std::cout << report_json(r).dump(2) << "\n";
      if (!ld_csv.empty()) {
        Table t;
        t.columns = {"d", "term", "partial_sum", "stderr"};
        const auto partial = r.partial_sums();
        for (std::size_t d = 0; d < r.terms.size(); ++d)
          t.add({std::to_string(d), format_number(r.terms[d]), format_number(partial[d]),
                 r.term_stderr.empty() ? "" : format_number(r.term_stderr[d])});
        write_file_atomic(ld_csv, t.to_csv());
      }
      return exit_ok;
    }

    if (*det) {
      const auto obs = load_observation(det_in);
      DetectorConfig dc;
      dc.alpha = det_alpha;
      dc.calibration_trials = det_calib;
      dc.validate();
      const auto cal = calibrate_threshold(model_of(obs, det_group), obs.n, dc, det_seed);
      const auto v = detect(obs, cal.threshold, dc.eigen);
      std::cout << json{{"label", std::string(1, v.label)},
                        {"statistic", v.statistic},
                        {"threshold", v.threshold},
                        {"top_eigenvalues", v.top_eigenvalues},
                        {"alpha", det_alpha},
                        {"calibration_trials", det_calib}}
                       .dump(2)
                << "\n";
      return exit_ok;
    }

    if (*pow_cmd) {
      DetectorConfig dc;
      dc.alpha = pw_alpha;
      dc.calibration_trials = pw_calib;
      const ModelSpec model = make_model(pw_model, pw_L, pw_group);
      const auto curve = power_curve(model, pw_n, parse_grid(pw_grid, "--lambda-grid"), pw_trials, dc, pw_seed);
      Table t;
      t.columns = {"model", "n", "lambda", "trials", "rejections", "power", "ci_low", "ci_high", "type1", "mean_top",
                   "threshold", "seed"};
      for (const auto& r : curve.rows)
        t.add({model.describe(), std::to_string(pw_n), format_number(r.lambda), std::to_string(r.trials),
               std::to_string(r.rejections), format_number(r.power), format_number(r.ci.lower),
               format_number(r.ci.upper), format_number(r.type1), format_number(r.mean_top),
               format_number(r.threshold), std::to_string(pw_seed)});
      emit(t.to_csv(), pw_out);
      return exit_ok;
    }

    if (*md) {
      const auto prior = md_prior == "circle" ? MdPrior::circle : MdPrior::cyclic;
      const auto form = md_form == "lemma" ? MdForm::lemma : MdForm::model;
      const auto count = md_count(prior, md_L, md_n, md_d, form, env_budget());
      std::cout << json{{"prior", md_prior}, {"form", md_form}, {"L", md_L}, {"n", md_n}, {"d", md_d}, {"count", count}}
                       .dump(2)
                << "\n";
      return exit_ok;
    }

    if (*bd) {
      json out;
      if (bd_which == "polylog") {
        const auto pb = bound_polylog(bd_L, bd_lambda, bd_D, bd_limit || bd_lambda < 1.0);
        out = {{"L", bd_L}, {"lambda", bd_lambda}, {"D", bd_D}, {"partial", pb.partial}, {"partial_sums", pb.partial_sums}};
        if (pb.limit) out["limit"] = *pb.limit;
      } else if (bd_which == "clt") {
        const Distribution dist = bd_dist == "rademacher" ? Distribution::rademacher() : Distribution::bernoulli(bd_p);
        const auto r = check_clt_moment_bound(dist, bd_n, bd_alpha);
        out = {{"distribution", dist.describe()}, {"n", bd_n}, {"alpha", bd_alpha},
               {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}};
      } else if (bd_which == "trec") {
        std::vector<double> alpha;
        for (const auto& p : split(bd_alpha_vec, ',')) alpha.push_back(parse_double(p, "--alpha-vec"));
        const auto r = check_t_recursion(bd_L, bd_n, bd_k, alpha, bd_gamma, env_budget());
        out = {{"L", bd_L}, {"n", bd_n}, {"k", bd_k}, {"alpha", alpha}, {"gamma", bd_gamma},
               {"holds", r.holds}, {"worst_ratio", r.worst_ratio}, {"lhs", r.lhs_at_worst},
               {"rhs", r.rhs_at_worst}, {"witness", r.witness}, {"tuples", r.tuples}};
      } else {
        LdlrOptions opt;
        opt.budget = env_budget();
        json rows = json::array();
        bool ok = true;
        for (const auto& r : check_l3_moment_bound(bd_n, bd_dmax, opt)) {
          rows.push_back({{"d", r.d}, {"moment", r.moment}, {"bound", r.bound}, {"holds", r.holds}, {"in_regime", r.in_regime}});
          ok &= r.holds;
          if (!r.in_regime) std::cerr << "warning: d=" << r.d << " lies outside d^3 <= n\n";
        }
        out = {{"n", bd_n}, {"rows", rows}, {"holds", ok}};
      }
      std::cout << out.dump(2) << "\n";
      return out.value("holds", true) ? exit_ok : exit_assertion;
    }

    if (*su) {
      json config;
      if (!su_config.empty()) {
        std::ifstream in(su_config);
        if (!in) fail(ErrorKind::config_error, "cannot open config '" + su_config + "'");
        try {
          config = json::parse(in);
        } catch (const json::parse_error& e) {
          fail(ErrorKind::config_error, su_config + ": " + e.what());
        }
      } else if (!su_kind.empty()) {
        config = {{"kind", su_kind}, {"seed", 1}};
      } else {
        fail(ErrorKind::config_error, "suite needs --config or --kind");
      }
      if (!su_kind.empty()) config["kind"] = su_kind;
      if (*su_seed_opt) config["seed"] = su_seed;
      for (const auto& s : su_set) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(ErrorKind::config_error, "--set expects path=value");
        json value;
        try {
          value = json::parse(s.substr(eq + 1));
        } catch (const json::parse_error&) {
          value = s.substr(eq + 1);
        }
        json* node = &config;
        const auto keys = split(s.substr(0, eq), '.');
        for (std::size_t i = 0; i + 1 < keys.size(); ++i) node = &(*node)[keys[i]];
        (*node)[keys.back()] = value;
      }
      apply_env_budgets(config);
      if (!su_out.empty()) config["output"]["csv"] = su_out;
      if (!su_manifest.empty()) config["output"]["manifest"] = su_manifest;
      const auto res = run(config);
      const json resolved = res.manifest["config"];
      write_outputs(res, resolved["output"]["csv"], resolved["output"].value("manifest", ""));
      std::cerr << res.manifest["kind"].get<std::string>() << ": " << res.table.rows.size() << " rows";
      if (res.manifest.contains("failures")) std::cerr << ", " << res.manifest["failures"].size() << " failed";
      std::cerr << "\n";
      if (res.manifest.contains("failures"))
        for (const auto& f : res.manifest["failures"])
          std::cerr << "  FAIL " << f["check"].get<std::string>() << " [" << f["params"].get<std::string>() << "] "
                    << f["note"].get<std::string>() << "\n";
      return res.exit_code;
    }

    if (*ph) {
      PhaseDiagramOptions po;
      po.L = parse_int_grid(ph_L, "--L-grid");
      po.lambda = parse_grid(ph_lambda, "--lambda-grid");
      po.n = parse_int_grid(ph_n, "--n");
      if (ph_drule.rfind("fixed:", 0) == 0)
        po.d_rule.fixed = static_cast<int>(parse_double(ph_drule.substr(6), "--D-rule"));
      else
        po.d_rule.c = parse_double(ph_drule, "--D-rule");
      po.trials = ph_trials;
      po.detector.alpha = ph_alpha;
      po.detector.calibration_trials = ph_calib;
      po.seed = ph_seed;
      po.budget = env_budget();
      const auto t = phase_diagram(po);
      emit(t.to_csv(), ph_out);
      if (!ph_manifest.empty()) {
        json m = detail::environment_info();
        m["kind"] = "phase-diagram";
        m["params"] = {{"L", po.L}, {"lambda", po.lambda}, {"n", po.n}, {"D_rule", po.d_rule.describe()},
                       {"trials", po.trials}, {"alpha", ph_alpha}, {"calibration_trials", ph_calib}, {"seed", ph_seed}};
        m["rows"] = t.rows.size();
        write_file_atomic(ph_manifest, m.dump(2) + "\n");
      }
      return exit_ok;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return (e.kind() == ErrorKind::config_error || e.kind() == ErrorKind::invalid_parameter) ? exit_config
                                                                                              : exit_assertion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_assertion;
  }
  return exit_ok;
}
