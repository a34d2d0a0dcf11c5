#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include "confcov/coordinate_oracle.hpp"
#include "confcov/operators.hpp"

using namespace confcov;

namespace {
const ParamPoly b1 = param(Param::Beta1), b2 = param(Param::Beta2), b3 = param(Param::Beta3), lam = param(Param::Lambda),
                mu = param(Param::Mu), d = param(Param::Dim);
ParamPoly c(long n) { return ParamPoly::constant(n); }
ParamRat rat(const ParamPoly& n, const ParamPoly& m) { return ParamRat(n) / ParamRat(m); }
}  // namespace

TEST_CASE("Bernstein-Sato polynomial") {
  ParamPoly b = b_poly();
  CHECK(evaluate(b, {{Param::Beta1, 0}, {Param::Beta2, 0}, {Param::Beta3, 0}, {Param::Dim, 2}}) == 64);
  CHECK(substitute(b, PolyBindings{{Param::Beta1, -d}}).is_zero());
  CHECK(build_B().size() == 6);
}

TEST_CASE("Bernstein-Sato identity") {
  BernsteinSatoReport rep = verify_bernstein_sato();
  CHECK(rep.passed);
  CHECK(rep.residual.is_zero());
  CHECK(rep.seconds < 10);
  CHECK(verify_bernstein_sato_coordinates(3, 1, 1, 1));

  try {
    verify_bernstein_sato(1);
    FAIL("perturbed identity passed");
  } catch (const IdentityFailed& e) {
    CHECK(e.residual() == InvariantKernel::monomial({0, 0, 0}, c(-1)));
  }
}

TEST_CASE("adjoint identities") {
  for (int dim : {2, 3}) {
    CHECK(formal_adjoint(build_E(), dim) == to_coord(build_F(), dim));
    CHECK(formal_adjoint(build_B(), dim) == to_coord(build_C(), dim));
  }
}

TEST_CASE("C becomes F under the beta/lambda map") {
  CHECK(build_C().substitute(lambda_mu_from_beta()) == build_F().substitute(lambda_mu_from_beta()));
  OperatorExpr lhs = build_C();
  OperatorExpr rhs = build_F().substitute(lambda_mu_from_beta());
  CHECK(lhs == rhs);
}

TEST_CASE("F is symmetric under y/z exchange when lambda = mu") {
  OperatorExpr f = build_F(lam, lam);
  OperatorExpr swapped;
  for (const auto& [w, coeff] : f.words()) {
    Word sw = w;
    for (auto& g : sw) {
      if (g.kind == GenKind::LapY)
        g.kind = GenKind::LapZ;
      else if (g.kind == GenKind::LapZ)
        g.kind = GenKind::LapY;
      else if (g.kind == GenKind::EulYZ)
        g.kind = GenKind::EulZY;
      else if (g.kind == GenKind::EulZY)
        g.kind = GenKind::EulYZ;
    }
    swapped.add_word(sw, coeff);
  }
  // LapY and LapZ commute, so reorder the leading word before comparing
  for (int dim : {2, 3}) CHECK(to_coord(swapped, dim) == to_coord(f, dim));
}

TEST_CASE("Ovsienko-Redou coefficients") {
  ParamPoly one = c(1), rho = d.scaled(Scalar(1, 2));
  CHECK(c_rst(0, 1, 0) == ParamRat(1L));
  CHECK(c_rst(0, 0, 1) == rat(-(lam + rho), mu + one));
  CHECK(c_rst(1, 0, 0) == rat(-(mu + rho), lam + one));
}

TEST_CASE("iterates") {
  CHECK(build_F_k(0) == OperatorExpr::identity().restricted_to_diagonal());
  CHECK(build_F_k(1) == build_F().restricted_to_diagonal());
  CHECK(build_C_k(0) == OperatorExpr::identity());
  BetaTriple shifted{b1 - c(2), b2, b3};
  CHECK(build_C_k(1) == build_C(shifted));
}

TEST_CASE("k = 1 symbol comparison") {
  for (int dim : {2, 3}) {
    SymbolComparison disp = compare_symbols(1, dim, RConvention::Display);
    REQUIRE(disp.ratio.has_value());
    CHECK(*disp.ratio == ParamRat(((lam + c(1)) * (mu + c(1))).scaled(-4)));
    CHECK(disp.ratio_depends_only_on_lambda_mu);
    CHECK_FALSE(compare_symbols(1, dim, RConvention::Formula).ratio.has_value());
  }
  SymbolComparison zero = compare_symbols(0, 2, RConvention::Formula);
  REQUIRE(zero.ratio.has_value());
  CHECK(*zero.ratio == ParamRat(1L));
}

TEST_CASE("beta/lambda maps") {
  BetaTriple beta = symbolic_beta();
  CHECK(lambda_to_beta(beta_to_lambda(beta)) == beta);

  Scalar m83(-8, 3);
  BetaTriple b{ParamPoly(m83), ParamPoly(m83), ParamPoly(m83)};
  LambdaTriple l = beta_to_lambda(b);
  Bindings d3{{Param::Dim, 3}};
  CHECK(evaluate(l.first, d3) == Scalar(-7, 6));
  CHECK(evaluate(l.second, d3) == Scalar(-7, 6));
  CHECK(evaluate(l.third, d3) == Scalar(-7, 6));

  LambdaTriple ls = beta_to_lambda(beta);
  CHECK(b1 + b2 + b3 == ls.first + ls.second + ls.third - d.scaled(Scalar(3, 2)));
}

TEST_CASE("c_k recursion") {
  CHECK(c_k_over_c0(0) == ParamRat(1L));
  for (unsigned k = 0; k <= 5; ++k) CHECK(recursion_consistency(k));
  // poles of (-b1/2)_k at b1 = 0, 2, ..., 2k-2
  ParamRat c3 = c_k_over_c0(3);
  for (long p : {0L, 2L, 4L})
    CHECK(substitute(c3.den(), Bindings{{Param::Beta1, p}, {Param::Dim, 3}}).is_zero());
  CHECK_FALSE(substitute(c3.den(), Bindings{{Param::Beta1, 6}, {Param::Dim, 3}}).is_zero());
}

TEST_CASE("Gamma-expressed constants") {
  using boost::math::constants::pi;
  HighFloat c1 = knapp_stein_multiplier(HighFloat(1), 2);
  CHECK(abs(c1 - 2 * pi<HighFloat>()) < HighFloat("1e-40"));
  CHECK_THROWS_AS(knapp_stein_multiplier(HighFloat(-2), 2), PoleAtParameter);
  CHECK_THROWS_AS(knapp_stein_multiplier(HighFloat(-4), 3), PoleAtParameter);
  CHECK_THROWS_AS(n_constant(HighFloat(0), HighFloat("0.3"), 2), PoleAtParameter);
  CHECK(isfinite(n_constant(HighFloat("0.25"), HighFloat("0.3"), 2)));
}
