#pragma once

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "confcov/exact_ring.hpp"
#include "confcov/invariant_calculus.hpp"
#include "confcov/operator_expr.hpp"
#include "confcov/symbol.hpp"

namespace confcov {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

class IdentityFailed : public Error {
 public:
  explicit IdentityFailed(InvariantKernel residual)
      : Error("identity failed, residual:\n" + residual.to_string()), residual_(std::move(residual)) {}
  explicit IdentityFailed(const std::string& what) : Error("identity failed: " + what) {}
  const InvariantKernel& residual() const { return residual_; }

 private:
  InvariantKernel residual_;
};

struct ParamTriple {
  ParamPoly first, second, third;
  friend bool operator==(const ParamTriple&, const ParamTriple&) = default;
};
using BetaTriple = ParamTriple;
using LambdaTriple = ParamTriple;

BetaTriple symbolic_beta();

// Bernstein-Sato operator and polynomial at the given beta (symbolic by default).
OperatorExpr build_B(const BetaTriple& beta = symbolic_beta());
ParamPoly b_poly(const BetaTriple& beta = symbolic_beta());

OperatorExpr build_E(const ParamPoly& lam = param(Param::Lambda), const ParamPoly& mu = param(Param::Mu));
OperatorExpr build_F(const ParamPoly& lam = param(Param::Lambda), const ParamPoly& mu = param(Param::Mu));
OperatorExpr build_C(const BetaTriple& beta = symbolic_beta());

struct BernsteinSatoReport {
  bool passed = false;
  InvariantKernel residual;
  std::size_t lhs_terms = 0;
  double seconds = 0;
};

// B l_(beta+2_1) - (b(beta) + perturbation) l_beta, symbolically in (beta, d).
// Throws IdentityFailed carrying the residual when it is nonzero.
BernsteinSatoReport verify_bernstein_sato(const Scalar& perturbation = 0);

// The same identity checked in coordinates at fixed dimension and beta.
bool verify_bernstein_sato_coordinates(int dim, const Scalar& beta1, const Scalar& beta2, const Scalar& beta3);

// Ovsienko-Redou coefficient c_rst(lambda, mu) with rho = d/2.
ParamRat c_rst(unsigned r, unsigned s, unsigned t);

// How the R^s weight of D^(k) is normalised: Formula uses c_rst as printed,
// Display multiplies by 2^s (reproduces the k = 1 display with 2R).
enum class RConvention { Formula, Display };
std::string to_string(RConvention c);

OperatorExpr build_OR_Dk(unsigned k, RConvention convention);
// F_{lam+k-1,mu+k-1} o ... o F_{lam,mu}, restricted to the diagonal.
OperatorExpr build_F_k(unsigned k);
// C_{beta-2_1} o ... o C_{beta-(2k)_1}
OperatorExpr build_C_k(unsigned k, const BetaTriple& beta = symbolic_beta());

LambdaTriple beta_to_lambda(const BetaTriple& beta);
BetaTriple lambda_to_beta(const LambdaTriple& lambda);

// Bindings lambda -> lambda2, mu -> lambda3 expressed through beta.
PolyBindings lambda_mu_from_beta(const BetaTriple& beta = symbolic_beta());

// c_k / c_0 as a rational function of beta1^0 (given as a polynomial) and d.
ParamRat c_k_over_c0(unsigned k, const ParamPoly& beta10 = param(Param::Beta1));
// c_(k+1)/c_k equals 1/((2k+2)(2k+d)(beta1+2)(beta1+d)) at beta1 = beta1^0 - 2k - 2.
bool recursion_consistency(unsigned k);

struct SymbolComparison {
  SymbolPoly symbol_F;
  SymbolPoly symbol_D;
  std::optional<ParamRat> ratio;  // symbol_F / symbol_D
  bool ratio_depends_only_on_lambda_mu = false;
};
SymbolComparison compare_symbols(unsigned k, int dim, RConvention convention);

// c(nu) = 2^nu pi^(d/2) Gamma(nu/2) / Gamma((d-nu)/2)
HighFloat knapp_stein_multiplier(const HighFloat& nu, int dim);
// pi^(2d)/16 * Gamma(l)Gamma(-l-1)Gamma(m)Gamma(-m-1)
//   / (Gamma(rho-l)Gamma(rho+l+1)Gamma(rho-m)Gamma(rho+m+1))
HighFloat n_constant(const HighFloat& lam, const HighFloat& mu, int dim);

// Gamma with explicit pole detection (PoleAtParameter at 0, -1, -2, ...).
HighFloat gamma_checked(const HighFloat& x, const std::string& label);
HighFloat to_high(const Scalar& q);

}  // namespace confcov
