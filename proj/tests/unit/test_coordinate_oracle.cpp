#include <doctest.h>

#include "confcov/coordinate_oracle.hpp"
#include "confcov/operators.hpp"
#include "confcov/symbol.hpp"

using namespace confcov;

namespace {
const ParamPoly b1 = param(Param::Beta1), b3 = param(Param::Beta3);
const Bindings beta_zero{{Param::Beta1, 0}, {Param::Beta2, 0}, {Param::Beta3, 0}};
CoordPoly y(int j) { return CoordPoly::variable(y_var(j)); }
CoordPoly z(int j) { return CoordPoly::variable(z_var(j)); }
CoordExpr radial(int dim) {
  CoordExpr e(dim);
  e.add_term({0, 0, 0}, CoordPoly::constant(1));
  return e;
}
CoordOperator dy(int dim, int j) {
  CoordOperator::DerivIndex a;
  a.e[y_var(j)] = 1;
  return CoordOperator::derivative(dim, a);
}
}  // namespace

TEST_CASE("coordinate derivatives") {
  CoordExpr expected(2);
  expected.add_term({-1, 0, 0}, y(0) * CoordPoly(b3));
  expected.add_term({0, 0, -1}, (y(0) - z(0)) * CoordPoly(b1));
  CHECK(partial_coord({false, 0}, radial(2)) == expected);

  // only |y - z| depends on z when the other exponents vanish
  const std::array<ParamPoly, 3> only_r{ParamPoly(), ParamPoly(), b1};
  CoordExpr r(2, only_r);
  r.add_term({0, 0, 0}, CoordPoly::constant(1));
  CoordExpr dz(2, only_r);
  dz.add_term({0, 0, -1}, (y(0) - z(0)) * CoordPoly(-b1));
  CHECK(partial_coord({true, 0}, r) == dz);

  const std::array<ParamPoly, 3> only_s{b3, ParamPoly(), ParamPoly()};
  CoordExpr s(3, only_s);
  s.add_term({0, 0, 0}, CoordPoly::constant(1));
  CoordExpr want(3, only_s);
  want.add_term({-1, 0, 0}, CoordPoly(b3 * (b3 + ParamPoly::constant(1))));
  CHECK(equivalent(apply_generator_coord({GenKind::LapY, 0}, s), want));
}

TEST_CASE("embed examples") {
  CHECK(embed(InvariantKernel::monomial({0, 0, 0}), 2) == radial(2));

  CoordExpr s = embed(InvariantKernel::monomial({1, 0, 0}), 2, beta_zero);
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms().at({0, 0, 0}) == y(0) * y(0) + y(1) * y(1));

  CoordExpr r = embed(InvariantKernel::monomial({0, 0, 1}), 2, beta_zero);
  CHECK(r.terms().at({0, 0, 0}) == (y(0) - z(0)) * (y(0) - z(0)) + (y(1) - z(1)) * (y(1) - z(1)));
}

TEST_CASE("formal adjoint examples") {
  CHECK(formal_adjoint(dy(2, 0)) == dy(2, 0).scaled(ParamPoly::constant(-1)));
  CoordOperator y1dy1 = CoordOperator::multiplication(2, y(0)) * dy(2, 0);
  CoordOperator want = y1dy1.scaled(ParamPoly::constant(-1)) - CoordOperator::identity(2);
  CHECK(formal_adjoint(y1dy1) == want);
}

TEST_CASE("double adjoint of B") {
  for (int dim : {2, 3}) {
    CoordOperator b = to_coord(build_B(), dim);
    CHECK(formal_adjoint(formal_adjoint(b)) == b);
  }
}

TEST_CASE("operator application matches composition") {
  CoordOperator a = CoordOperator::multiplication(2, y(1)) * dy(2, 0);
  CoordOperator b = dy(2, 0) * CoordOperator::multiplication(2, y(0) * z(1));
  CoordPoly f = y(0) * y(0) * y(1) + z(1);
  CHECK(apply(a * b, f) == apply(a, apply(b, f)));
}

TEST_CASE("symbols of the fundamental operators") {
  for (int dim : {2, 3}) {
    CHECK(restrict_symbol(exp_apply(OperatorExpr::gen(GenKind::LapY), dim)) ==
          SymbolPoly::monomial(dim, 1, 0, 0, ParamRat(1L)));
    CHECK(restrict_symbol(exp_apply(OperatorExpr::gen(GenKind::MixedR), dim)) ==
          SymbolPoly::monomial(dim, 0, 1, 0, ParamRat(1L)));
    CHECK(restrict_symbol(exp_apply(OperatorExpr::gen(GenKind::LapZ), dim)) ==
          SymbolPoly::monomial(dim, 0, 0, 1, ParamRat(1L)));
  }
}

TEST_CASE("symbol of F restricted to the diagonal") {
  ParamPoly lam = param(Param::Lambda), mu = param(Param::Mu), one = ParamPoly::constant(1);
  for (int dim : {2, 3}) {
    ParamPoly rho = ParamPoly(Scalar(dim, 2));
    SymbolPoly want = SymbolPoly::monomial(dim, 1, 0, 0, ParamRat(((mu + one) * (mu + rho)).scaled(4))) +
                      SymbolPoly::monomial(dim, 0, 1, 0, ParamRat(((lam + one) * (mu + one)).scaled(-8))) +
                      SymbolPoly::monomial(dim, 0, 0, 1, ParamRat(((lam + one) * (lam + rho)).scaled(4)));
    CHECK(restrict_symbol(exp_apply(build_F().restricted_to_diagonal(), dim)) == want);
    CHECK(symbol(build_F().restricted_to_diagonal(), dim) == want);
  }
}

TEST_CASE("symbol is multiplicative on constant-coefficient words") {
  OperatorExpr p = OperatorExpr::gen(GenKind::LapY) + OperatorExpr::gen(GenKind::MixedR).scaled(ParamRat(3L));
  OperatorExpr q = OperatorExpr::gen(GenKind::LapZ) - OperatorExpr::gen(GenKind::LapY).scaled(ParamRat(2L));
  for (int dim : {2, 3}) CHECK(symbol(p * q, dim) == symbol(p, dim) * symbol(q, dim));
}

TEST_CASE("non-invariant restriction is rejected") {
  CHECK_THROWS_AS(restrict_symbol(exp_apply(OperatorExpr::gen(GenKind::PartialY, 0), 2)), NotInvariant);
}
