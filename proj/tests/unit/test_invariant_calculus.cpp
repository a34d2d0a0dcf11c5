#include <doctest.h>

#include "confcov/coordinate_oracle.hpp"
#include "confcov/invariant_calculus.hpp"
#include "confcov/oracle_suite.hpp"
#include "test_support.hpp"

using namespace confcov;

namespace {
const ParamPoly b1 = param(Param::Beta1), b2 = param(Param::Beta2), b3 = param(Param::Beta3), d = param(Param::Dim);
const Bindings beta_zero{{Param::Beta1, 0}, {Param::Beta2, 0}, {Param::Beta3, 0}};
ParamPoly c(long n) { return ParamPoly::constant(n); }
InvariantKernel unit() { return InvariantKernel::monomial({0, 0, 0}); }
}  // namespace

TEST_CASE("partial derivatives follow the power rule") {
  InvariantKernel dr = partial(Invariant::R, unit());
  CHECK(dr == InvariantKernel::monomial({0, 0, -1}, b1.scaled(Scalar(1, 2))));

  InvariantKernel s = InvariantKernel::monomial({1, 0, 0}).substitute(beta_zero);
  CHECK(partial(Invariant::S, s).substitute(beta_zero) == unit());
}

TEST_CASE("mixed partials commute") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    InvariantKernel k = random_kernel(rng);
    for (Invariant u : {Invariant::S, Invariant::T, Invariant::R})
      for (Invariant v : {Invariant::S, Invariant::T, Invariant::R})
        CHECK(partial(u, partial(v, k)) == partial(v, partial(u, k)));
  }
}

TEST_CASE("multiplication by invariants") {
  CHECK(mul_invariant(Invariant::R, unit()) == InvariantKernel::monomial({0, 0, 1}));
  CHECK(mul_invariant(Invariant::S, InvariantKernel()).is_zero());
  // [d_r, r] acts as the identity on every monomial
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    InvariantKernel k = random_kernel(rng);
    CHECK(partial(Invariant::R, mul_invariant(Invariant::R, k)) - mul_invariant(Invariant::R, partial(Invariant::R, k)) ==
          k);
  }
}

TEST_CASE("generator examples") {
  InvariantKernel s = InvariantKernel::monomial({1, 0, 0}).substitute(beta_zero);
  CHECK(lap_y(s).substitute(beta_zero) == InvariantKernel::monomial({0, 0, 0}, d.scaled(2)));

  InvariantKernel pure_s = InvariantKernel::monomial({0, 0, 0}).substitute({{Param::Beta1, 0}, {Param::Beta2, 0}});
  CHECK(lap_y(pure_s).substitute({{Param::Beta1, 0}, {Param::Beta2, 0}}) ==
        InvariantKernel::monomial({-1, 0, 0}, b3 * (b3 + d - c(2))));

  CHECK(euler_yz(unit().substitute(beta_zero)).substitute(beta_zero).is_zero());
}

TEST_CASE("Laplacian of a pure power agrees with coordinates") {
  std::mt19937_64 rng(5);
  for (int dim : {2, 3, 4})
    for (int n = 0; n < 5; ++n) {
      Bindings beta{{Param::Beta1, 0}, {Param::Beta2, 0}, {Param::Beta3, testing::random_scalar(rng, 7, 3)}};
      InvariantKernel k = unit();
      Generator g{GenKind::LapY, 0};
      CHECK(equivalent(embed(apply_generator(g, k), dim, beta), apply_generator_coord(g, embed(k, dim, beta))));
    }
}

TEST_CASE("apply_word") {
  std::mt19937_64 rng(17);
  InvariantKernel k = random_kernel(rng);
  CHECK(apply_word(OperatorExpr::identity(), k) == k);
  CHECK(is_zero(k - k));
  CHECK_THROWS_AS(apply_word(OperatorExpr::gen(GenKind::PartialY, 0), k), UnsupportedGenerator);

  OperatorExpr lap2 = OperatorExpr::gen(GenKind::LapY) * OperatorExpr::gen(GenKind::LapY);
  InvariantKernel st = InvariantKernel::monomial({1, 1, 0});
  CHECK(equivalent(embed(apply_word(lap2, st), 2, beta_zero), apply_word_coord(lap2, embed(st, 2, beta_zero))));
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 30; ++n) {
    InvariantKernel k1 = random_kernel(rng), k2 = random_kernel(rng);
    ParamPoly a = testing::random_param_poly(rng, 2, 1), b = testing::random_param_poly(rng, 2, 1);
    for (GenKind g : {GenKind::MulR, GenKind::LapY, GenKind::LapZ, GenKind::MixedR, GenKind::EulYZ, GenKind::EulZY}) {
      Generator gen{g, 0};
      CHECK(apply_generator(gen, k1.scaled(a) + k2.scaled(b)) ==
            apply_generator(gen, k1).scaled(a) + apply_generator(gen, k2).scaled(b));
    }
  }
}

TEST_CASE("y/z swap intertwines the generators") {
  std::mt19937_64 rng(29);
  for (int n = 0; n < 50; ++n) {
    InvariantKernel k = random_kernel(rng);
    CHECK(swap_yz(lap_y(k)) == lap_z(swap_yz(k)));
    CHECK(swap_yz(euler_yz(k)) == euler_zy(swap_yz(k)));
    CHECK(swap_yz(mixed_R(k)) == mixed_R(swap_yz(k)));
  }
}

TEST_CASE("oracle equivalence, small sample") {
  OracleReport r = oracle_equivalence_suite(10, {2, 3}, 1);
  CHECK(r.cases == 120);
  CHECK(r.passed());
}

TEST_CASE("equivalence detects a wrong result") {
  std::mt19937_64 rng(31);
  Bindings beta = random_beta(rng);
  InvariantKernel k = InvariantKernel::monomial({0, 0, 0}, c(1));
  Generator g{GenKind::LapY, 0};
  InvariantKernel wrong = apply_generator(g, k) + InvariantKernel::monomial({-1, 0, 0});
  CHECK_FALSE(equivalent(embed(wrong, 3, beta), apply_generator_coord(g, embed(k, 3, beta))));
  CHECK_FALSE(equivalent(embed(wrong, 1, beta), apply_generator_coord(g, embed(k, 1, beta))));
}
