#include <doctest.h>

#include <cstdlib>

#include <boost/math/constants/constants.hpp>

#include "confcov/coordinate_oracle.hpp"
#include "confcov/covariance.hpp"
#include "confcov/identities.hpp"
#include "confcov/knapp_stein.hpp"
#include "confcov/sphere_quad.hpp"
#include "confcov/test_function.hpp"

using namespace confcov;

namespace {

const double kPi = boost::math::constants::pi<double>();

Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

// Gauss-Hermite nodes and weights for exp(-t^2) (Golub-Welsch).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Eigen::VectorXd w = std::sqrt(kPi) * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

// int_{E x E} F for F = polynomial * exp(-|y - m_y|^2/(2 s_y^2) - |z - m_z|^2/(2 s_z^2)), d = 2.
// Tensor Gauss-Hermite with n nodes per axis is exact below degree 2n.
double pairing(const std::function<double(const Point&, const Point&)>& F, const Point& my, double sy, const Point& mz,
               double sz, int n = 16) {
  auto [t, w] = gauss_hermite(n);
  const double ay = std::sqrt(2.0) * sy, az = std::sqrt(2.0) * sz;
  double total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Point y = my + ay * pt(t(i), t(j)), z = mz + az * pt(t(k), t(l));
          double e = t(i) * t(i) + t(j) * t(j) + t(k) * t(k) + t(l) * t(l);
          total += w(i) * w(j) * w(k) * w(l) * F(y, z) * std::exp(e);
        }
  return total * ay * ay * az * az;
}

}  // namespace

TEST_CASE("conformal factor examples") {
  Point x = pt(0.3, -1.2);
  CHECK(GroupElement({Dilate{2.5}}).kappa(x) == doctest::Approx(2.5));
  CHECK(GroupElement({Invert{}}).kappa(x) == doctest::Approx(1 / x.squaredNorm()));
  CHECK(GroupElement({Translate{pt(4, 5)}}).kappa(x) == 1);
  CHECK_THROWS_AS(GroupElement({Invert{}}).act(pt(1e-4, 0)), SingularPoint);
  CHECK_THROWS_AS(GroupElement({Dilate{-1}}), std::invalid_argument);
  Orthogonal bad = Orthogonal::Identity(2, 2);
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(GroupElement({Rotate{bad}}), std::invalid_argument);
}

TEST_CASE("group law") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    GroupElement g = random_element(rng, 3, GroupClass::Mixed);
    Point x = random_point(rng, 3, 1.0);
    try {
      CHECK((g.inverse().act(g.act(x)) - x).norm() <= 1e-9 * (1 + x.norm()));
      GroupElement h = random_element(rng, 3, GroupClass::Mixed);
      CHECK(((g * h).act(x) - g.act(h.act(x))).norm() <= 1e-9 * (1 + g.act(h.act(x)).norm()));
    } catch (const SingularPoint&) {
    }
  }
}

TEST_CASE("distance identity example") {
  GroupElement inv({Invert{}});
  Point x = pt(1, 0), y = pt(0, 2);
  CHECK((inv.act(x) - inv.act(y)).squaredNorm() == doctest::Approx(1.25));
  CHECK(distance_identity_residual(inv, x, y) <= 1e-15);
  CHECK(distance_identity_residual(GroupElement({Translate{pt(3, -1)}}), x, y) == 0);
  CHECK(stereographic_distance_residual(x, y) <= 1e-15);
  CHECK(stereographic(x).norm() == doctest::Approx(1));
}

TEST_CASE("group identity suites") {
  IdentityReport rep = group_identities(200, 5, 3, 3);
  CHECK(rep.passed());
  for (const auto& s : rep.stats) CHECK(s.max_residual <= s.tolerance);
}

TEST_CASE("principal series action") {
  std::mt19937_64 rng(2);
  TestFunction f = TestFunction::random(rng, 2, 1);
  Point x = pt(0.2, 0.4);
  CHECK(pi_apply(GroupElement(), 0.3, f, x) == doctest::Approx(f(x)));
  // lambda = -rho: no conformal factor
  CHECK(pi_apply(GroupElement({Dilate{2}}), -1.0, f, x) == doctest::Approx(f(x / 2)));
}

TEST_CASE("duality detects the wrong representation") {
  std::mt19937_64 rng(8);
  GroupElement g = random_element(rng, 2, GroupClass::InvertComposed);
  TestFunction phi = TestFunction::random(rng, 2, 1), psi = TestFunction::random(rng, 2, 1);
  DualityResult ok = duality_residual(g, 0.4, phi, psi);
  CHECK(ok.residual <= 1e-6);
  // pairing pi_lambda with pi_lambda instead of pi_-lambda
  double wrong = integrate_2d(
      [&](const Point& x) {
        try {
          return phi(x) * pi_apply(g.inverse(), 0.4, psi, x);
        } catch (const SingularPoint&) {
          return 0.0;
        }
      },
      phi.center(0), 9 * phi.width(0));
  CHECK(std::abs(ok.lhs - wrong) / std::abs(ok.reference) > 1e-3);
}

TEST_CASE("adjoint pairing of B at d = 2") {
  std::mt19937_64 rng(19);
  Bindings beta{{Param::Beta1, Scalar(1, 3)}, {Param::Beta2, Scalar(-2, 5)}, {Param::Beta3, Scalar(3, 7)}};
  CoordOperator B = to_coord(build_B(), 2, beta);
  CoordOperator Bt = formal_adjoint(B);
  TestFunction f = TestFunction::random(rng, 2, 2, 2, 1.0), g = TestFunction::random(rng, 2, 2, 2, 1.0);
  TestFunction Bf = apply(B, f, beta), Btg = apply(Bt, g, beta);
  // Both functions have width w, so the product Gaussian is centered at the
  // midpoints with width w / sqrt(2).
  const double w = 1.0 / std::sqrt(2.0);
  Point my = 0.5 * (f.center(0) + g.center(0)), mz = 0.5 * (f.center(1) + g.center(1));
  double lhs = pairing([&](const Point& y, const Point& z) { return Bf(y, z) * g(y, z); }, my, w, mz, w);
  double rhs = pairing([&](const Point& y, const Point& z) { return f(y, z) * Btg(y, z); }, my, w, mz, w);
  // a different operator pairs differently
  TestFunction Bg = apply(B, g, beta);
  double wrong = pairing([&](const Point& y, const Point& z) { return f(y, z) * Bg(y, z); }, my, w, mz, w);
  CHECK(std::abs(lhs - wrong) > 1e-3 * std::abs(lhs));
  CHECK(std::abs(lhs) > 1e-6);
  CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs));
}

TEST_CASE("finite-difference weights") {
  std::vector<double> w = fornberg_weights(1, 1);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(-0.5));
  CHECK(w[1] == doctest::Approx(0).epsilon(1e-15));
  CHECK(w[2] == doctest::Approx(0.5));
  std::vector<double> w2 = fornberg_weights(2, central_half_width(2));
  double sum = 0, second = 0;
  for (std::size_t i = 0; i < w2.size(); ++i) {
    double x = static_cast<double>(i) - central_half_width(2);
    sum += w2[i];
    second += w2[i] * x * x;
  }
  CHECK(std::abs(sum) <= 1e-12);
  CHECK(second == doctest::Approx(2));
}

TEST_CASE("covariance residuals") {
  auto pairs = std::vector<std::pair<Scalar, Scalar>>{{Scalar(1, 3), Scalar(1, 5)}};
  CovarianceSweep tr = covariance_sweep("F1", build_F_k(1), 1, pairs, {GroupClass::Translate}, 4, 5);
  CHECK(tr.max_residual() <= 1e-9);
  CovarianceSweep inv = covariance_sweep("F1", build_F_k(1), 1, pairs, {GroupClass::InvertComposed}, 4, 5);
  CHECK(inv.max_residual() <= 1e-6);
  // a wrong target weight is detected
  CovarianceSweep wrong = covariance_sweep("F1", build_F_k(1), 2, pairs, {GroupClass::InvertComposed}, 4, 5);
  CHECK(wrong.max_residual() > 1e-3);
}

TEST_CASE("sphere volume") {
  for (int dim : {2, 3}) {
    QuadReport r = sphere_quad({0, 0, 0}, dim, {}, QuadMethod::Adaptive);
    double v = sphere_volume(dim).convert_to<double>();
    CHECK(std::abs(r.estimate - v) <= 1e-6 * v);
    QuadReport mc = sphere_quad({0, 0, 0}, dim, {}, QuadMethod::MonteCarlo, 1 << 16, 1);
    CHECK(std::abs(mc.estimate - v) <= 1e-12 * v);  // constant integrand: zero variance
  }
  CHECK(sphere_volume(2).convert_to<double>() == doctest::Approx(2 * kPi * kPi));
}

TEST_CASE("sphere quadrature errors") {
  CHECK_THROWS_AS(sphere_quad({-2, 0, 0}, 2, {}, QuadMethod::Adaptive), NotConvergent);
  CHECK_THROWS_AS(sphere_quad({0, -3.5, 0}, 3, {}, QuadMethod::MonteCarlo), NotConvergent);
  CHECK_THROWS_AS(sphere_quad({0, 0, 0}, 2, {5}, QuadMethod::Adaptive), std::invalid_argument);
  CHECK_THROWS_AS(sphere_quad({0, 0, 0}, 2, {1, 1, 1, 1}, QuadMethod::Adaptive), std::invalid_argument);
  CHECK(sphere_quad({-1, -1, -1}, 2, {1}, QuadMethod::Adaptive).estimate == 0);
  CHECK(sphere_quad({-1, -1, -1}, 2, {1, 2}, QuadMethod::Adaptive).estimate == 0);
}

TEST_CASE("Monte-Carlo is deterministic across worker counts") {
  const Beta3 b{-1, -0.5, -1.5};
  ::setenv("CONFCOV_THREADS", "1", 1);
  QuadReport one = sphere_quad(b, 2, {1, 3}, QuadMethod::MonteCarlo, 1 << 17, 99);
  ::setenv("CONFCOV_THREADS", "3", 1);
  QuadReport three = sphere_quad(b, 2, {1, 3}, QuadMethod::MonteCarlo, 1 << 17, 99);
  ::unsetenv("CONFCOV_THREADS");
  CHECK(one.estimate == three.estimate);
  CHECK(one.error_estimate == three.error_estimate);
  CHECK(one.evaluations == three.evaluations);
  QuadReport other = sphere_quad(b, 2, {1, 3}, QuadMethod::MonteCarlo, 1 << 17, 100);
  CHECK(other.estimate != one.estimate);
}

TEST_CASE("Monte-Carlo agrees with the adaptive rule") {
  const Beta3 b{-1.2, -0.4, 0.5};
  for (const std::vector<int>& m : {std::vector<int>{}, {1, 1}, {2, 4}, {3, 3}}) {
    QuadReport a = sphere_quad(b, 2, m, QuadMethod::Adaptive);
    QuadReport mc = sphere_quad(b, 2, m, QuadMethod::MonteCarlo, 1 << 18, 4);
    CHECK(std::abs(a.estimate - mc.estimate) <= 4 * mc.error_estimate);
  }
}

TEST_CASE("positivity and swap symmetry") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.9, 1.5);
  for (int i = 0; i < 5; ++i) {
    Beta3 b{u(rng), u(rng), u(rng)};
    QuadReport r = sphere_quad(b, 2, {}, QuadMethod::Adaptive);
    CHECK(r.estimate > 0);
    QuadReport s = sphere_quad({b[0], b[2], b[1]}, 2, {}, QuadMethod::Adaptive);
    CHECK(std::abs(r.estimate - s.estimate) <= 1e-8 * r.estimate);
  }
  QuadReport m1 = sphere_quad({-1, -0.5, -1.5}, 2, {}, QuadMethod::MonteCarlo, 1 << 18, 1);
  QuadReport m2 = sphere_quad({-1, -1.5, -0.5}, 2, {}, QuadMethod::MonteCarlo, 1 << 18, 2);
  CHECK(std::abs(m1.estimate - m2.estimate) <= 3 * std::hypot(m1.error_estimate, m2.error_estimate));
}

TEST_CASE("c0 closed form") {
  std::array<Scalar, 3> b{Scalar(-4, 3), Scalar(-4, 3), Scalar(-4, 3)};
  double c0 = c0_closed_form(b, 2).convert_to<double>();
  double mag = kPi * kPi / 512 * 3 * std::pow(std::abs(std::tgamma(1.0 / 3) / std::tgamma(-1.0 / 3)), 3);
  CHECK(std::abs(c0) == doctest::Approx(mag).epsilon(1e-12));
  CHECK(c0 < 0);
  CHECK_THROWS_AS(c0_closed_form({Scalar(-1), Scalar(-1), Scalar(-1)}, 2), NotOnCriticalPlane);
}

TEST_CASE("residue ratio check preconditions") {
  CHECK_THROWS_AS(residue_ratio_check_k1({Scalar(-2), Scalar(-2), Scalar(-2)}, 3, 1 << 16, 1), NotOnCriticalPlane);
  // on H_1 but beta_1 <= -d
  CHECK_THROWS_AS(residue_ratio_check_k1({Scalar(-4), Scalar(-2), Scalar(-2)}, 3, 1 << 16, 1), NotConvergent);
  ResidueRatioReport r =
      residue_ratio_check_k1({Scalar(-8, 3), Scalar(-8, 3), Scalar(-8, 3)}, 3, 1 << 18, 5);
  CHECK(r.lambda == Scalar(-7, 6));
  CHECK(r.mu == Scalar(-7, 6));
  for (double e : r.expected) CHECK(e == doctest::Approx(r.expected[0]));
}

TEST_CASE("closed integrals") {
  QuadReport r = radial_integral(2);
  CHECK(std::abs(r.estimate - kPi / 3) <= 1e-8);
  CHECK(radial_integral_closed_form(2).convert_to<double>() == doctest::Approx(kPi / 3).epsilon(1e-15));
  for (int dim : {1, 3, 4})
    CHECK(radial_integral(dim).estimate ==
          doctest::Approx(radial_integral_closed_form(dim).convert_to<double>()).epsilon(1e-10));
}

TEST_CASE("f0") {
  Beta3 b{-1, -2, -1};
  CHECK(f0_value(b, {0, 0}, {0, 0}, {0, 0}) == 1);
  // f0(x, x, x) = (1 + |x|^2)^(-sum beta)
  CHECK(f0_value(b, {1, 1}, {1, 1}, {1, 1}) == doctest::Approx(std::pow(3.0, 4)));
  CHECK(std::isfinite(f0_closed_form({Scalar(-1, 2), Scalar(-1, 3), Scalar(1, 5)}, 2).convert_to<double>()));
}

TEST_CASE("Wynn epsilon") {
  std::vector<double> s;
  double acc = 0;
  for (int n = 1; n <= 20; ++n) {
    acc += (n % 2 ? 1.0 : -1.0) / n;
    s.push_back(acc);
  }
  CHECK(std::abs(wynn_epsilon(s) - std::log(2.0)) <= 1e-12);
  CHECK(std::abs(s.back() - std::log(2.0)) > 1e-3);
}

TEST_CASE("Knapp-Stein") {
  CHECK(knapp_stein_multiplier(HighFloat(1), 2).convert_to<double>() == doctest::Approx(2 * kPi));
  // I_nu G(0) = pi Gamma(nu/2) at d = 2
  CHECK(knapp_stein_gaussian(1, 2, 1e-12) == doctest::Approx(kPi * std::tgamma(0.5)).epsilon(1e-9));
  CHECK_THROWS_AS(knapp_stein_gaussian(2, 2, 1), NotConvergent);
  CHECK_THROWS_AS(knapp_stein_check(0, 2, {1}), NotConvergent);
  CHECK_THROWS_AS(knapp_stein_check(2.5, 2, {1}), NotConvergent);
  KnappSteinReport r = knapp_stein_check(1, 2, {1});
  CHECK(r.passed);
  CHECK(r.max_relative_error <= 1e-4);
}
