#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "confcov/covariance.hpp"
#include "confcov/identities.hpp"
#include "confcov/knapp_stein.hpp"
#include "confcov/operators.hpp"
#include "confcov/oracle_suite.hpp"
#include "confcov/sphere_quad.hpp"
#include "run_config.hpp"

using nlohmann::json;
using namespace confcov;
using namespace confcov::cli;

namespace {

constexpr int kExitCheckFailed = 2;
constexpr int kExitOracleMismatch = 3;
constexpr int kExitConfig = 4;

std::string hf(const HighFloat& x) { return x.str(25); }

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

class Report {
 public:
  Report(std::string command, const RunConfig& cfg) : command_(std::move(command)), config_(to_json(cfg)) {}

  // `values` holds the residuals or estimates behind the verdict.
  void check(const std::string& name, Verdict v, const std::string& method, const std::string& tolerance,
             json values) {
    checks_.push_back({{"name", name},
                       {"verdict", cli_verdict(v)},
                       {"method", method},
                       {"tolerance", tolerance},
                       {"values", std::move(values)}});
    if (v != Verdict::Pass) failed_ = true;
    summary_.push_back(std::string(v == Verdict::Pass ? "PASS " : v == Verdict::Fail ? "FAIL " : "INCONCLUSIVE ") +
                       name);
  }
  void note(const std::string& line) { summary_.push_back("  " + line); }

  bool failed() const { return failed_; }

  json finish(double seconds) const {
    json j;
    j["schema"] = kReportSchema;
    j["artifact_version"] = CONFCOV_VERSION;
    j["command"] = command_;
    j["config"] = config_;
    j["checks"] = checks_;
    j["verdict"] = failed_ ? "fail" : "pass";
    j["timing"] = {{"seconds", num(seconds)}, {"threads", worker_count()}};
    return j;
  }
  const std::vector<std::string>& summary() const { return summary_; }

 private:
  static std::string cli_verdict(Verdict v) { return to_string(v); }

  std::string command_;
  json config_;
  json checks_ = json::array();
  std::vector<std::string> summary_;
  bool failed_ = false;
};

Verdict gate(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

// ---- subcommands -----------------------------------------------------------

int run_verify_bs(const RunConfig& cfg, Report& rep, bool dump, const std::string& perturbation) {
  OracleReport orc = oracle_equivalence_suite(cfg.verify_bs.oracle_cases, cfg.verify_bs.oracle_dims, cfg.seed);
  json fails = json::array();
  for (const auto& f : orc.failures) fails.push_back({{"generator", f.generator}, {"d", f.dim}});
  rep.check("oracle-equivalence", gate(orc.passed()), "invariant calculus vs coordinate expansion", "0",
            {{"cases", orc.cases}, {"mismatches", orc.mismatches}, {"failures", fails}});
  if (!orc.passed()) return kExitOracleMismatch;

  Scalar eps = perturbation.empty() ? Scalar(0) : parse_scalar(perturbation);
  InvariantKernel residual;
  bool ok = true;
  std::size_t lhs_terms = 0;
  try {
    BernsteinSatoReport bs = verify_bernstein_sato(eps);
    residual = bs.residual;
    lhs_terms = bs.lhs_terms;
  } catch (const IdentityFailed& e) {
    residual = e.residual();
    ok = false;
  }
  json values{{"residual_terms", residual.terms().size()}, {"lhs_terms", lhs_terms}};
  if (dump) values["difference"] = residual.to_string();
  rep.check("bernstein-sato", gate(ok), "exact symbolic canonicalization in (beta1, beta2, beta3, d)", "0", values);
  if (dump) rep.note("difference: " + residual.to_string());
  return ok ? 0 : kExitCheckFailed;
}

int run_compare_symbols(const RunConfig& cfg, Report& rep) {
  std::vector<RConvention> convs;
  if (!cfg.symbols.convention)
    convs = {RConvention::Formula, RConvention::Display};
  else
    convs = {*cfg.symbols.convention == "formula" ? RConvention::Formula : RConvention::Display};
  bool any = false;
  for (RConvention c : convs) {
    SymbolComparison sc = compare_symbols(cfg.symbols.k, cfg.symbols.dim, c);
    bool prop = sc.ratio.has_value();
    any = any || prop;
    std::string ratio = prop ? sc.ratio->to_string() : "NOT-PROPORTIONAL";
    rep.check("proportional/" + to_string(c), gate(prop && sc.ratio_depends_only_on_lambda_mu),
              "exact coefficient division of symbols", "0",
              {{"symbol_F", sc.symbol_F.to_string()},
               {"symbol_D", sc.symbol_D.to_string()},
               {"ratio", ratio},
               {"ratio_depends_only_on_lambda_mu", sc.ratio_depends_only_on_lambda_mu}});
    rep.note(to_string(c) + ": " + ratio);
  }
  return any ? 0 : kExitCheckFailed;
}

int run_covariance(const RunConfig& cfg, Report& rep) {
  const auto& c = cfg.covariance;
  for (unsigned k : {1u, 2u}) {
    CovarianceSweep sw = covariance_sweep("F" + std::to_string(k), build_F_k(k), k, default_parameter_pairs(),
                                          default_group_classes(), c.points, cfg.seed, c.dim);
    json cells = json::array();
    for (const auto& cell : sw.cells)
      cells.push_back({{"class", to_string(cell.group_class)},
                       {"lambda", num(cell.lambda)},
                       {"mu", num(cell.mu)},
                       {"points", cell.points},
                       {"rejected", cell.rejected},
                       {"max_residual", num(cell.max_residual)}});
    std::string name = "covariance/F" + std::to_string(k);
    rep.check(name, gate(sw.max_residual() <= c.tolerance),
              "order-8 central finite differences of the exact symbol, relative sup residual", num(c.tolerance),
              {{"max_residual", num(sw.max_residual())}, {"cells", cells}});
    rep.note("max residual " + num(sw.max_residual()));
  }
  ConventionVerdict v = adjudicate_convention(c.points, cfg.seed, c.tolerance);
  json res, passing = json::array();
  for (const auto& [conv, r] : v.max_residual) res[to_string(conv)] = num(r);
  for (RConvention conv : v.passing) passing.push_back(to_string(conv));
  rep.check("convention-adjudication", gate(v.passing.size() == 1),
            "covariance of D^(1) under each R-weight convention; exactly one must pass", num(v.tolerance),
            {{"max_residual", res}, {"passing", passing}});
  return rep.failed() ? kExitCheckFailed : 0;
}

int run_quad_c0(const RunConfig& cfg, Report& rep) {
  const auto& c = cfg.quad_c0;
  Beta3 beta{c.beta[0].get_d(), c.beta[1].get_d(), c.beta[2].get_d()};
  HighFloat closed = c0_closed_form(c.beta, c.dim);
  QuadReport q = sphere_quad(beta, c.dim, {}, c.method, c.budget, cfg.seed);
  double cf = closed.convert_to<double>();
  double dev = std::abs(std::abs(q.estimate) - std::abs(cf)) / std::abs(cf);
  bool same_sign = (q.estimate < 0) == (cf < 0);
  rep.check("c0-magnitude", gate(dev <= c.tolerance), "sphere quadrature (" + to_string(q.method) + ") vs Gamma product",
            num(c.tolerance),
            {{"estimate", num(q.estimate)},
             {"error_estimate", num(q.error_estimate)},
             {"evaluations", std::to_string(q.evaluations)},
             {"closed_form", hf(closed)},
             {"magnitude_ratio", num(std::abs(q.estimate) / std::abs(cf))},
             {"relative_deviation", num(dev)},
             {"sign_verdict", same_sign ? "signs agree" : "signs differ"}});
  rep.note("estimate " + num(q.estimate) + ", closed form " + hf(closed));
  return rep.failed() ? kExitCheckFailed : 0;
}

int run_quad_a1(const RunConfig& cfg, Report& rep) {
  const auto& c = cfg.quad_a1;
  ResidueRatioReport r =
      residue_ratio_check_k1(c.beta, c.dim, c.budget, cfg.seed, c.ratio_tolerance, c.isotropy_sigmas);
  auto triple = [](const std::array<double, 3>& t) { return json::array({num(t[0]), num(t[1]), num(t[2])}); };
  json values{{"lambda", num(r.lambda)},
              {"mu", num(r.mu)},
              {"A", num(r.A)},
              {"B", num(r.B)},
              {"C", num(r.C)},
              {"A_err", num(r.A_err)},
              {"B_err", num(r.B_err)},
              {"C_err", num(r.C_err)},
              {"measured", triple(r.measured)},
              {"expected", triple(r.expected)},
              {"samples", std::to_string(r.samples)}};
  rep.check("a1-ratios", gate(r.ratios_match), "stratified Monte Carlo second moments, one fitted constant",
            num(c.ratio_tolerance), {{"max_ratio_deviation", num(r.max_ratio_deviation)}, {"detail", values}});
  rep.check("a1-isotropy", gate(r.isotropic), "off-diagonal and block-diagonal spread in standard errors",
            num(c.isotropy_sigmas),
            {{"max_offdiag_sigmas", num(r.max_offdiag_sigmas)}, {"max_diag_spread_sigmas", num(r.max_diag_spread_sigmas)}});
  rep.note("measured (A, 2C, B) = (" + num(r.measured[0]) + ", " + num(r.measured[1]) + ", " + num(r.measured[2]) + ")");
  return rep.failed() ? kExitCheckFailed : 0;
}

int run_quad_closed(const RunConfig& cfg, Report& rep) {
  const auto& c = cfg.closed;
  for (int d : c.dims) {
    QuadReport q = radial_integral(d);
    HighFloat exact = radial_integral_closed_form(d);
    double e = exact.convert_to<double>();
    double err = std::abs(q.estimate - e) / e;
    rep.check("radial/d=" + std::to_string(d), gate(err <= c.radial_tolerance), "exp-sinh radial quadrature",
              num(c.radial_tolerance),
              {{"estimate", num(q.estimate)}, {"closed_form", hf(exact)}, {"relative_error", num(err)}});
  }
  for (int d : c.dims) {
    QuadReport q = sphere_quad({0, 0, 0}, d, {}, QuadMethod::Adaptive);
    HighFloat exact = sphere_volume(d);
    double e = exact.convert_to<double>();
    double err = std::abs(q.estimate - e) / e;
    rep.check("sphere-volume/d=" + std::to_string(d), gate(err <= c.volume_tolerance), "adaptive sphere quadrature",
              num(c.volume_tolerance),
              {{"estimate", num(q.estimate)}, {"closed_form", hf(exact)}, {"relative_error", num(err)}});
  }
  return rep.failed() ? kExitCheckFailed : 0;
}

int run_ks(const RunConfig& cfg, Report& rep) {
  const auto& c = cfg.knapp_stein;
  for (double nu : c.nu) {
    KnappSteinReport r = knapp_stein_check(nu, c.dim, c.xi, c.tolerance);
    json samples = json::array();
    for (const auto& s : r.samples)
      samples.push_back({{"xi", num(s.xi)},
                         {"quadrature", num(s.quadrature)},
                         {"target", num(s.target)},
                         {"relative_error", num(s.relative_error)},
                         {"intervals", s.intervals}});
    rep.check("knapp-stein/nu=" + num(nu), gate(r.passed),
              "Hankel transform between Bessel zeros with Wynn epsilon extrapolation", num(c.tolerance),
              {{"multiplier", num(r.multiplier)}, {"max_relative_error", num(r.max_relative_error)}, {"samples", samples}});
  }
  return rep.failed() ? kExitCheckFailed : 0;
}

int run_identities(const RunConfig& cfg, Report& rep) {
  const auto& c = cfg.identities;
  IdentityReport r = group_identities(c.n, c.duality_cases, cfg.seed, c.dim, c.tolerance, c.duality_tolerance);
  for (const auto& s : r.stats) {
    std::string method = s.name == "duality" ? "adaptive Gauss-Kronrod over both pairings, relative residual"
                                             : "direct evaluation in double precision, relative residual";
    rep.check(s.name, gate(s.passed()), method, num(s.tolerance),
              {{"cases", s.cases}, {"rejected", s.rejected}, {"max_residual", num(s.max_residual)}});
    rep.note(s.name + " max residual " + num(s.max_residual));
  }
  return rep.failed() ? kExitCheckFailed : 0;
}

struct ConstsArgs {
  bool bpoly = false;
  std::string at;
  int dim = 2;
  bool dim_set = false;
  std::vector<unsigned> ck;
  std::vector<double> cnu;
  std::string clm;
};

int run_consts(const ConstsArgs& a, Report& rep) {
  if (!a.bpoly && a.ck.empty() && a.cnu.empty() && a.clm.empty())
    throw ConfigError("consts needs at least one of --bpoly, --ck, --cnu, --clm");
  if (a.bpoly) {
    ParamPoly b = b_poly();
    json values{{"polynomial", to_string(b)}};
    if (!a.at.empty()) {
      auto beta = parse_triple(a.at);
      Scalar v = evaluate(b, {{Param::Beta1, beta[0]}, {Param::Beta2, beta[1]}, {Param::Beta3, beta[2]}, {Param::Dim, a.dim}});
      values["at"] = {num(beta[0]), num(beta[1]), num(beta[2])};
      values["d"] = a.dim;
      values["value"] = num(v);
      rep.note("b = " + num(v));
    }
    rep.check("b-polynomial", Verdict::Pass, "exact", "0", values);
  }
  for (unsigned k : a.ck) {
    bool ok = recursion_consistency(k);
    rep.check("c_k/c_0 k=" + std::to_string(k), gate(ok), "exact rational function; recursion step k -> k+1 checked",
              "0", {{"ratio", c_k_over_c0(k).to_string()}, {"recursion_consistent", ok}});
  }
  for (double nu : a.cnu) {
    HighFloat v = knapp_stein_multiplier(HighFloat(num(nu)), a.dim);
    rep.check("c(nu) nu=" + num(nu), Verdict::Pass, "Gamma closed form", "0", {{"d", a.dim}, {"value", hf(v)}});
    rep.note("c(" + num(nu) + ") = " + hf(v));
  }
  if (!a.clm.empty()) {
    std::vector<double> lm = parse_list(a.clm);
    if (lm.size() != 2) throw ConfigError("--clm expects lambda,mu");
    HighFloat v = n_constant(HighFloat(num(lm[0])), HighFloat(num(lm[1])), a.dim);
    rep.check("c(lambda,mu)", Verdict::Pass, "Gamma closed form", "0",
              {{"lambda", num(lm[0])}, {"mu", num(lm[1])}, {"d", a.dim}, {"value", hf(v)}});
    rep.note("c(lambda, mu) = " + hf(v));
  }
  return rep.failed() ? kExitCheckFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical checks for conformally covariant bi-differential operators", "confcov"};
  app.set_version_flag("--version", std::string(CONFCOV_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed")->group("Common");
  app.add_option("--config", config_path, "JSON config or earlier report")->check(CLI::ExistingFile)->group("Common");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout")->group("Common");
  app.add_flag("-q,--quiet", quiet, "suppress the summary on stderr")->group("Common");

  auto* verify = app.add_subcommand("verify-bs", "oracle cross-validation, then the Bernstein-Sato identity");
  bool dump = false;
  std::size_t oracle_cases = 0;
  std::string perturb;
  verify->add_flag("--dump", dump, "include the canonical kernel difference");
  auto* oracle_opt = verify->add_option("--oracle-cases", oracle_cases, "random cases per generator and dimension");
  verify->add_option("--perturb", perturb)->group("");

  auto* symbols = app.add_subcommand("compare-symbols", "symbol of F^(k) against D^(k)");
  unsigned k = 0;
  int sym_d = 0;
  std::string conv;
  auto* k_opt = symbols->add_option("--k", k)->check(CLI::Range(0, 3));
  auto* symd_opt = symbols->add_option("--d", sym_d)->check(CLI::Range(2, 5));
  auto* conv_opt = symbols->add_option("--convention", conv)->check(CLI::IsMember({"formula", "display"}));

  auto* cov = app.add_subcommand("covariance", "finite-difference covariance of F^(1), F^(2) and convention check");
  std::size_t points = 0;
  auto* points_opt = cov->add_option("--points", points, "sample points per cell");

  auto* qc0 = app.add_subcommand("quad-c0", "sphere quadrature of I_beta(1) against the closed form");
  int qc0_d = 0;
  std::string qc0_beta, qc0_method;
  std::uint64_t qc0_budget = 0;
  auto* qc0_d_opt = qc0->add_option("--d", qc0_d)->check(CLI::Range(1, 5));
  auto* qc0_beta_opt = qc0->add_option("--beta", qc0_beta, "b1,b2,b3 as rationals");
  auto* qc0_method_opt = qc0->add_option("--method", qc0_method)->check(CLI::IsMember({"adaptive", "monte_carlo"}));
  auto* qc0_budget_opt = qc0->add_option("--budget", qc0_budget, "Monte-Carlo samples");

  auto* qa1 = app.add_subcommand("quad-a1", "k = 1 residue coefficient ratios by Monte Carlo");
  int qa1_d = 0;
  std::string qa1_beta;
  std::uint64_t qa1_budget = 0;
  auto* qa1_d_opt = qa1->add_option("--d", qa1_d)->check(CLI::Range(1, 5));
  auto* qa1_beta_opt = qa1->add_option("--beta", qa1_beta, "b1,b2,b3 as rationals");
  auto* qa1_budget_opt = qa1->add_option("--budget", qa1_budget, "Monte-Carlo samples");

  auto* closed = app.add_subcommand("quad-closed", "radial integral and sphere volumes against closed forms");
  std::vector<int> closed_dims;
  auto* closed_opt = closed->add_option("--d", closed_dims)->delimiter(',')->check(CLI::Range(1, 5));

  auto* ks = app.add_subcommand("ks-check", "Knapp-Stein multiplier by Fourier quadrature");
  int ks_d = 0;
  std::string ks_nu, ks_xi;
  auto* ks_d_opt = ks->add_option("--d", ks_d)->check(CLI::Range(1, 5));
  auto* ks_nu_opt = ks->add_option("--nu", ks_nu, "comma-separated");
  auto* ks_xi_opt = ks->add_option("--xi", ks_xi, "comma-separated");

  auto* ids = app.add_subcommand("identities", "cocycle, distance, stereographic and duality identities");
  std::size_t ids_n = 0, ids_dual = 0;
  auto* ids_n_opt = ids->add_option("--n", ids_n, "cases for cocycle, distance and stereographic");
  auto* ids_dual_opt = ids->add_option("--duality-cases", ids_dual);

  auto* consts = app.add_subcommand("consts", "b(beta), c_k/c_0, c(nu) and c(lambda, mu)");
  ConstsArgs ca;
  consts->add_flag("--bpoly", ca.bpoly, "Bernstein-Sato polynomial");
  consts->add_option("--at", ca.at, "b1,b2,b3 at which to evaluate b");
  auto* cd_opt = consts->add_option("--d", ca.dim)->check(CLI::Range(1, 5));
  consts->add_option("--ck", ca.ck, "k values")->delimiter(',')->check(CLI::Range(0, 8));
  consts->add_option("--cnu", ca.cnu, "nu values")->delimiter(',');
  consts->add_option("--clm", ca.clm, "lambda,mu");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  auto start = std::chrono::steady_clock::now();
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed_opt->count()) cfg.seed = seed;
    if (!out_path.empty()) cfg.out = out_path;
    if (oracle_opt->count()) cfg.verify_bs.oracle_cases = oracle_cases;
    if (k_opt->count()) cfg.symbols.k = k;
    if (symd_opt->count()) cfg.symbols.dim = sym_d;
    if (conv_opt->count()) cfg.symbols.convention = conv;
    if (points_opt->count()) cfg.covariance.points = points;
    if (qc0_d_opt->count()) cfg.quad_c0.dim = qc0_d;
    if (qc0_beta_opt->count()) cfg.quad_c0.beta = parse_triple(qc0_beta);
    if (qc0_method_opt->count()) cfg.quad_c0.method = qc0_method == "adaptive" ? QuadMethod::Adaptive : QuadMethod::MonteCarlo;
    if (qc0_budget_opt->count()) cfg.quad_c0.budget = qc0_budget;
    if (qa1_d_opt->count()) cfg.quad_a1.dim = qa1_d;
    if (qa1_beta_opt->count()) cfg.quad_a1.beta = parse_triple(qa1_beta);
    if (qa1_budget_opt->count()) cfg.quad_a1.budget = qa1_budget;
    if (closed_opt->count()) cfg.closed.dims = closed_dims;
    if (ks_d_opt->count()) cfg.knapp_stein.dim = ks_d;
    if (ks_nu_opt->count()) cfg.knapp_stein.nu = parse_list(ks_nu);
    if (ks_xi_opt->count()) cfg.knapp_stein.xi = parse_list(ks_xi);
    if (ids_n_opt->count()) cfg.identities.n = ids_n;
    if (ids_dual_opt->count()) cfg.identities.duality_cases = ids_dual;
    if (!cd_opt->count()) ca.dim = 2;

    CLI::App* sub = app.get_subcommands().front();
    Report rep(sub->get_name(), cfg);
    int rc = 0;
    if (sub == verify) rc = run_verify_bs(cfg, rep, dump, perturb);
    else if (sub == symbols) rc = run_compare_symbols(cfg, rep);
    else if (sub == cov) rc = run_covariance(cfg, rep);
    else if (sub == qc0) rc = run_quad_c0(cfg, rep);
    else if (sub == qa1) rc = run_quad_a1(cfg, rep);
    else if (sub == closed) rc = run_quad_closed(cfg, rep);
    else if (sub == ks) rc = run_ks(cfg, rep);
    else if (sub == ids) rc = run_identities(cfg, rep);
    else rc = run_consts(ca, rep);

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string text = rep.finish(secs).dump(2) + "\n";
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      if (!out) throw ConfigError("cannot write " + cfg.out);
      out << text;
    }
    if (!quiet)
      for (const auto& line : rep.summary()) std::cerr << line << "\n";
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotOnCriticalPlane& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotConvergent& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PoleAtParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
