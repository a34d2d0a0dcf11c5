#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confcov/covariance.hpp"
#include "confcov/identities.hpp"
#include "confcov/knapp_stein.hpp"
#include "confcov/operators.hpp"
#include "confcov/oracle_suite.hpp"
#include "confcov/sphere_quad.hpp"

namespace py = pybind11;
using namespace confcov;

namespace {

std::array<Scalar, 3> rational_triple(const std::array<std::string, 3>& t) {
  return {parse_scalar(t[0]), parse_scalar(t[1]), parse_scalar(t[2])};
}

RConvention convention(const std::string& name) {
  if (name == "formula") return RConvention::Formula;
  if (name == "display") return RConvention::Display;
  throw py::value_error("convention must be 'formula' or 'display'");
}

QuadMethod quad_method(const std::string& name) {
  if (name == "adaptive") return QuadMethod::Adaptive;
  if (name == "monte_carlo") return QuadMethod::MonteCarlo;
  throw py::value_error("method must be 'adaptive' or 'monte_carlo'");
}

double to_double(const HighFloat& x) { return x.convert_to<double>(); }

}  // namespace

PYBIND11_MODULE(_confcov, m) {
  m.doc() = "Exact and numerical checks for conformally covariant bi-differential operators";

  // translators are tried newest first, so the base goes first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NotConvergent>(m, "NotConvergent", PyExc_ArithmeticError);
  py::register_exception<NotOnCriticalPlane>(m, "NotOnCriticalPlane", PyExc_ValueError);
  py::register_exception<PoleAtParameter>(m, "PoleAtParameter", PyExc_ArithmeticError);

  m.def(
      "b_poly", [](std::optional<std::array<std::string, 3>> at, int d) -> std::string {
        ParamPoly b = b_poly();
        if (!at) return to_string(b);
        auto beta = rational_triple(*at);
        return evaluate(b, {{Param::Beta1, beta[0]}, {Param::Beta2, beta[1]}, {Param::Beta3, beta[2]}, {Param::Dim, d}})
            .get_str();
      },
      py::arg("at") = py::none(), py::arg("d") = 2,
      "b(beta) as text, or its exact value at rational beta and dimension d");

  m.def(
      "verify_bernstein_sato", [](const std::string& perturbation) {
        try {
          BernsteinSatoReport r = verify_bernstein_sato(parse_scalar(perturbation));
          return py::dict(py::arg("passed") = r.passed, py::arg("difference") = r.residual.to_string(),
                          py::arg("seconds") = r.seconds);
        } catch (const IdentityFailed& e) {
          return py::dict(py::arg("passed") = false, py::arg("difference") = e.residual().to_string(),
                          py::arg("seconds") = 0.0);
        }
      },
      py::arg("perturbation") = "0");

  m.def(
      "oracle_suite", [](std::size_t cases, const std::vector<int>& dims, std::uint64_t seed) {
        OracleReport r = oracle_equivalence_suite(cases, dims, seed);
        return py::dict(py::arg("cases") = r.cases, py::arg("mismatches") = r.mismatches,
                        py::arg("passed") = r.passed());
      },
      py::arg("cases"), py::arg("dims") = std::vector<int>{2, 3, 4}, py::arg("seed") = 1);

  m.def(
      "compare_symbols", [](unsigned k, int d, const std::string& conv) {
        SymbolComparison s = compare_symbols(k, d, convention(conv));
        return py::dict(py::arg("symbol_F") = s.symbol_F.to_string(), py::arg("symbol_D") = s.symbol_D.to_string(),
                        py::arg("ratio") = s.ratio ? py::object(py::str(s.ratio->to_string())) : py::object(py::none()),
                        py::arg("ratio_depends_only_on_lambda_mu") = s.ratio_depends_only_on_lambda_mu);
      },
      py::arg("k"), py::arg("d"), py::arg("convention") = "display");

  m.def("c_k_over_c0", [](unsigned k) { return c_k_over_c0(k).to_string(); }, py::arg("k"));
  m.def("recursion_consistency", &recursion_consistency, py::arg("k"));
  m.def(
      "knapp_stein_multiplier", [](double nu, int d) { return to_double(knapp_stein_multiplier(HighFloat(nu), d)); },
      py::arg("nu"), py::arg("d"));
  m.def(
      "n_constant", [](double lam, double mu, int d) { return to_double(n_constant(HighFloat(lam), HighFloat(mu), d)); },
      py::arg("lam"), py::arg("mu"), py::arg("d"));

  m.def(
      "covariance_max_residual", [](unsigned k, std::size_t points, std::uint64_t seed) {
        return covariance_sweep("F", build_F_k(k), k, default_parameter_pairs(), default_group_classes(), points, seed)
            .max_residual();
      },
      py::arg("k"), py::arg("points") = 5, py::arg("seed") = 1);

  m.def(
      "sphere_quad", [](const Beta3& beta, int d, const std::vector<int>& monomial, const std::string& method,
                        std::uint64_t budget, std::uint64_t seed) {
        QuadReport r = sphere_quad(beta, d, monomial, quad_method(method), budget, seed);
        return py::dict(py::arg("estimate") = r.estimate, py::arg("error_estimate") = r.error_estimate,
                        py::arg("evaluations") = r.evaluations);
      },
      py::arg("beta"), py::arg("d"), py::arg("monomial") = std::vector<int>{}, py::arg("method") = "adaptive",
      py::arg("budget") = 1 << 22, py::arg("seed") = 1);
  m.def(
      "c0_closed_form", [](const std::array<std::string, 3>& beta, int d) { return to_double(c0_closed_form(rational_triple(beta), d)); },
      py::arg("beta"), py::arg("d"));
  m.def(
      "residue_ratio_check_k1", [](const std::array<std::string, 3>& beta, int d, std::uint64_t budget, std::uint64_t seed) {
        ResidueRatioReport r = residue_ratio_check_k1(rational_triple(beta), d, budget, seed);
        return py::dict(py::arg("measured") = r.measured, py::arg("expected") = r.expected,
                        py::arg("max_ratio_deviation") = r.max_ratio_deviation, py::arg("isotropic") = r.isotropic,
                        py::arg("ratios_match") = r.ratios_match);
      },
      py::arg("beta"), py::arg("d"), py::arg("budget") = 1 << 22, py::arg("seed") = 1);
  m.def("radial_integral", [](int d) { return radial_integral(d).estimate; }, py::arg("d"));
  m.def("sphere_volume", [](int d) { return to_double(sphere_volume(d)); }, py::arg("d"));

  m.def(
      "knapp_stein_check", [](double nu, int d, const std::vector<double>& xis, double tol) {
        KnappSteinReport r = knapp_stein_check(nu, d, xis, tol);
        return py::dict(py::arg("multiplier") = r.multiplier, py::arg("max_relative_error") = r.max_relative_error,
                        py::arg("passed") = r.passed);
      },
      py::arg("nu"), py::arg("d"), py::arg("xis"), py::arg("tolerance") = 1e-4);

  m.def(
      "group_identities", [](std::size_t n, std::size_t duality_cases, std::uint64_t seed, int d) {
        IdentityReport r = group_identities(n, duality_cases, seed, d);
        py::dict out;
        for (const auto& s : r.stats) out[py::str(s.name)] = s.max_residual;
        return out;
      },
      py::arg("n"), py::arg("duality_cases") = 0, py::arg("seed") = 1, py::arg("d") = 2);
}
