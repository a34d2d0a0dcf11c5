#include <doctest.h>

#include "confcov/exact_ring.hpp"
#include "test_support.hpp"

using namespace confcov;
using confcov::testing::random_param_poly;

namespace {
ParamPoly P(const char* s) { return parse_param_poly(s); }
const ParamPoly b1 = param(Param::Beta1), b2 = param(Param::Beta2), lam = param(Param::Lambda),
                mu = param(Param::Mu), d = param(Param::Dim);
}  // namespace

TEST_CASE("polynomial expansion and substitution") {
  CHECK((b1 + d) * (b1 + ParamPoly::constant(2)) == P("b1^2 + b1*d + 2*b1 + 2*d"));
  CHECK(substitute(b1 + d, Bindings{{Param::Beta1, 0}, {Param::Dim, 2}}) == ParamPoly::constant(2));
  CHECK((P("b1*lam + 3") * ParamPoly()).is_zero());
}

TEST_CASE("canonical serialization") {
  ParamPoly p = ParamPoly(Scalar(3, 2)) * b1 * b1 * d;
  CHECK(to_string(p) == "3/2*b1^2*d");
  CHECK(to_string(P("d + b1 - 1")) == "b1 + d - 1");
  CHECK(to_string(P("mu*lam + lam^2")) == "lam^2 + lam*mu");
  CHECK(to_string(ParamPoly()) == "0");
  CHECK(to_string(-b2) == "-b2");
  CHECK(to_string(rho()) == "1/2*d");
}

TEST_CASE("parse round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    ParamPoly p = random_param_poly(rng, 5, 3);
    CHECK(parse_param_poly(to_string(p)) == p);
  }
  CHECK(parse_scalar("-4/3") == Scalar(-4, 3));
  CHECK(parse_scalar("0.25") == Scalar(1, 4));
  CHECK(parse_scalar("-1.5e1") == Scalar(-15));
  CHECK_THROWS(parse_param_poly("b1 + x"));
}

TEST_CASE("exact division") {
  CHECK(exact_div(P("b1^2 - d^2"), P("b1 - d")) == P("b1 + d"));
  CHECK_THROWS_AS(exact_div(b1, d), NotDivisible);
  CHECK(exact_div(ParamPoly(), P("b1 + 1")).is_zero());
  CHECK_THROWS_AS(exact_div(b1, ParamPoly()), DivisionByZero);
}

TEST_CASE("pochhammer") {
  ParamPoly a = lam;
  CHECK(pochhammer(a, 3) == a * (a + ParamPoly::constant(1)) * (a + ParamPoly::constant(2)));
  CHECK(pochhammer(ParamPoly::constant(1), 4) == ParamPoly::constant(24));
  CHECK(pochhammer(lam + ParamPoly::constant(1), 0) == ParamPoly::constant(1));
  std::mt19937_64 rng(11);
  for (unsigned m = 0; m < 6; ++m) {
    ParamPoly x = random_param_poly(rng, 2, 1);
    CHECK(pochhammer(x, m + 1) == pochhammer(x, m) * (x + ParamPoly::constant(m)));
  }
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    ParamPoly a = random_param_poly(rng), b = random_param_poly(rng), c = random_param_poly(rng);
    REQUIRE((a + b) * c == a * c + b * c);
    REQUIRE(a * b == b * a);
    REQUIRE((a - a).is_zero());
  }
}

TEST_CASE("exact_div inverts multiplication") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    ParamPoly a = random_param_poly(rng), b = random_param_poly(rng);
    if (b.is_zero()) continue;
    REQUIRE(exact_div(a * b, b) == a);
  }
}

TEST_CASE("substitute commutes with arithmetic") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    ParamPoly a = random_param_poly(rng), b = random_param_poly(rng);
    Bindings bind{{Param::Beta1, confcov::testing::random_scalar(rng)},
                  {Param::Dim, confcov::testing::random_scalar(rng)}};
    REQUIRE(substitute(a * b, bind) == substitute(a, bind) * substitute(b, bind));
    REQUIRE(substitute(a + b, bind) == substitute(a, bind) + substitute(b, bind));
  }
}

TEST_CASE("canonical form is idempotent") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    ParamPoly a = random_param_poly(rng);
    ParamPoly rebuilt;
    for (const auto& [m, c] : a.terms()) rebuilt.add_term(m, c);
    CHECK(rebuilt == a);
    CHECK(parse_param_poly(to_string(rebuilt)) == a);
  }
}

TEST_CASE("gcd") {
  ParamPoly g = P("b1 + d + 2");
  ParamPoly a = g * P("lam - mu"), b = g * P("lam + 2*mu + 1");
  CHECK(gcd(a, b) == g);
  CHECK(gcd(b1, d) == ParamPoly::constant(1));
  CHECK(gcd(P("2*b1 + 4"), P("3*b1 + 6")) == P("b1 + 2"));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    ParamPoly x = random_param_poly(rng, 3, 2), y = random_param_poly(rng, 3, 2), z = random_param_poly(rng, 2, 1);
    if (x.is_zero() || y.is_zero() || z.is_zero()) continue;
    ParamPoly h = gcd(x * z, y * z);
    REQUIRE(try_exact_div(h, gcd(z, z)).has_value());
    REQUIRE(try_exact_div(x * z, h).has_value());
    REQUIRE(try_exact_div(y * z, h).has_value());
  }
}

TEST_CASE("rational functions") {
  ParamRat r(P("lam^2 - 1"), P("2*lam + 2"));
  CHECK(r.num() == P("1/2*lam - 1/2"));
  CHECK(r.is_polynomial());
  ParamRat q(P("lam"), P("mu"));
  CHECK(q.to_string() == "lam/mu");
  CHECK(q * ParamRat(mu) == ParamRat(lam));
  CHECK(q + q == ParamRat(P("2*lam"), mu));
  CHECK((q - q).is_zero());
  CHECK_THROWS_AS(ParamRat(1L) / ParamRat(), DivisionByZero);
  CHECK_THROWS_AS(ParamRat(lam, ParamPoly()), DivisionByZero);
  ParamRat neg(P("1"), P("-2*mu - 2"));
  CHECK(neg.den() == P("mu + 1"));
  CHECK(neg.num() == P("-1/2"));
}

TEST_CASE("proportionality") {
  auto r = is_proportional(ParamRat(P("2*lam + 2")), ParamRat(P("lam + 1")));
  REQUIRE(r);
  CHECK(*r == ParamRat(2L));
  auto s = is_proportional(ParamRat(lam), ParamRat(mu));
  REQUIRE(s);
  CHECK(*s == ParamRat(lam, mu));
  CHECK(!is_proportional(ParamRat(lam), ParamRat()).has_value());
}

TEST_CASE("rational field axioms") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    ParamPoly a = random_param_poly(rng, 3, 1), b = random_param_poly(rng, 3, 1), c = random_param_poly(rng, 3, 1);
    if (b.is_zero() || c.is_zero()) continue;
    ParamRat x(a, b), y(c, a.is_zero() ? ParamPoly::constant(1) : a);
    REQUIRE((x + y) - y == x);
    if (!y.is_zero()) REQUIRE((x * y) / y == x);
    REQUIRE(x * (y + ParamRat(1L)) == x * y + x);
  }
}
