#include "confcov/knapp_stein.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace confcov {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

double sphere_area(int n) { return 2 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace

double knapp_stein_gaussian(double nu, int dim, double r) {
  if (!(nu > 0 && nu < dim)) throw NotConvergent("Knapp-Stein integral needs 0 < nu < d");
  // y = x - rho*omega: |x - y|^(nu - d) dy = rho^(nu - 1) drho domega and
  // |y|^2 = (rho - r)^2 + 4 r rho sin^2(theta/2).
  boost::math::quadrature::tanh_sinh<double> ts(10);
  auto angular = [&](double rho) {
    if (dim == 1) return std::exp(-(rho - r) * (rho - r)) + std::exp(-(rho + r) * (rho + r));
    double a = 4 * r * rho;
    auto f = [&](double th) {
      double s = std::sin(0.5 * th);
      return std::exp(-a * s * s) * (dim == 2 ? 1.0 : std::pow(std::sin(th), dim - 2));
    };
    double split = std::min(kPi, 8 / std::sqrt(std::max(a, 1e-300)));
    double v = ts.integrate(f, 0.0, split, 1e-12);
    if (split < kPi) v += ts.integrate(f, split, kPi, 1e-12);
    return sphere_area(dim - 1) * std::exp(-(rho - r) * (rho - r)) * v;
  };
  auto radial = [&](double rho) { return std::pow(rho, nu - 1) * angular(rho); };
  boost::math::quadrature::exp_sinh<double> es;
  double out = 0;
  if (r > 0) out += ts.integrate(radial, 0.0, r, 1e-12);
  out += es.integrate([&](double t) { return radial(r + t); }, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
  return out;
}

double wynn_epsilon(const std::vector<double>& s) {
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("empty sequence");
  // cols[k + 1] is eps_k; even columns are estimates.
  double best = s.back();
  std::vector<std::vector<double>> cols;
  cols.push_back(std::vector<double>(n + 1, 0.0));  // eps_{-1} = 0
  cols.push_back(s);
  for (std::size_t k = 1; k < n; ++k) {
    const auto& a = cols[cols.size() - 2];
    const auto& b = cols.back();
    std::vector<double> c(b.size() - 1);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      double diff = b[i + 1] - b[i];
      if (diff == 0) {
        ok = false;
        break;
      }
      c[i] = a[i + 1] + 1 / diff;
    }
    if (!ok || c.empty()) break;
    cols.push_back(std::move(c));
    if (k % 2 == 0) best = cols.back().back();
  }
  return best;
}

KnappSteinReport knapp_stein_check(double nu, int dim, const std::vector<double>& xis, double tolerance) {
  if (!(nu > 0 && nu < dim)) throw NotConvergent("Knapp-Stein integral needs 0 < nu < d");
  KnappSteinReport rep;
  rep.nu = nu;
  rep.dim = dim;
  rep.multiplier = knapp_stein_multiplier(HighFloat(nu), dim).convert_to<double>();
  const double order = 0.5 * dim - 1;
  using boost::math::quadrature::gauss_kronrod;
  for (double xi : xis) {
    if (!(xi > 0)) throw std::invalid_argument("|xi| must be positive");
    auto f = [&](double r) {
      return knapp_stein_gaussian(nu, dim, r) * boost::math::cyl_bessel_j(order, xi * r) * std::pow(r, 0.5 * dim);
    };
    std::vector<double> sums;
    double lo = 0, acc = 0, last = std::numeric_limits<double>::quiet_NaN();
    KnappSteinSample smp;
    smp.xi = xi;
    const int kMaxIntervals = 120;
    for (int k = 1; k <= kMaxIntervals; ++k) {
      double hi = boost::math::cyl_bessel_j_zero(order, k) / xi;
      acc += gauss_kronrod<double, 31>::integrate(f, lo, hi, 6, 1e-13);
      lo = hi;
      sums.push_back(acc);
      smp.intervals = k;
      if (k >= 12 && k % 2 == 0) {
        double e = wynn_epsilon(sums);
        if (std::abs(e - last) <= 1e-9 * std::abs(e)) {
          last = e;
          break;
        }
        last = e;
      }
    }
    double pre = std::pow(2 * kPi, 0.5 * dim) * std::pow(xi, 1 - 0.5 * dim);
    smp.quadrature = pre * last;
    smp.target = rep.multiplier * std::pow(xi, -nu) * std::pow(kPi, 0.5 * dim) * std::exp(-0.25 * xi * xi);
    smp.relative_error = std::abs(smp.quadrature - smp.target) / std::abs(smp.target);
    rep.max_relative_error = std::max(rep.max_relative_error, smp.relative_error);
    rep.samples.push_back(smp);
  }
  rep.passed = rep.max_relative_error <= tolerance;
  return rep;
}

}  // namespace confcov
