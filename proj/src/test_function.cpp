#include "confcov/test_function.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "confcov/errors.hpp"

namespace confcov {

namespace {

std::array<double, kCoordVars> coords(const Point& y, const Point* z) {
  std::array<double, kCoordVars> x{};
  for (int j = 0; j < y.size(); ++j) x[y_var(j)] = y(j);
  if (z)
    for (int j = 0; j < z->size(); ++j) x[z_var(j)] = (*z)(j);
  return x;
}

double identity_coeff(double c) { return c; }

}  // namespace

TestFunction::TestFunction(int dim, int nvec, NumPoly poly, std::array<Point, 2> center, std::array<double, 2> width)
    : dim_(dim), nvec_(nvec), poly_(std::move(poly)), center_(std::move(center)), width_(width) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
  if (nvec != 1 && nvec != 2) throw std::invalid_argument("test functions have one or two vector variables");
  for (int v = 0; v < nvec; ++v) {
    if (center_[v].size() != dim) throw std::invalid_argument("center has wrong dimension");
    if (!(width_[v] > 0)) throw std::invalid_argument("width must be positive");
  }
}

TestFunction TestFunction::random(std::mt19937_64& rng, int dim, int nvec, int degree, double width) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> exp(0, degree);
  NumPoly p = NumPoly::constant(1);
  for (int n = 0; n < 3; ++n) {
    NumPoly::Mono m;
    for (int v = 0; v < nvec; ++v) {
      std::uniform_int_distribution<int> axis(0, dim - 1);
      m.e[v == 0 ? y_var(axis(rng)) : z_var(axis(rng))] = static_cast<std::uint16_t>(exp(rng));
    }
    p.add_term(m, coeff(rng));
  }
  std::array<Point, 2> center{random_point(rng, dim, 0.5), random_point(rng, dim, 0.5)};
  if (nvec == 1) center[1] = Point::Zero(dim);
  return TestFunction(dim, nvec, p, center, {width, width});
}

double TestFunction::operator()(const Point& y) const {
  if (nvec_ != 1) throw std::invalid_argument("test function needs two arguments");
  double g = -(y - center_[0]).squaredNorm() / (2 * width_[0] * width_[0]);
  return poly_.evaluate(coords(y, nullptr), identity_coeff) * std::exp(g);
}

double TestFunction::operator()(const Point& y, const Point& z) const {
  if (nvec_ != 2) throw std::invalid_argument("test function needs one argument");
  double g = -(y - center_[0]).squaredNorm() / (2 * width_[0] * width_[0]) -
             (z - center_[1]).squaredNorm() / (2 * width_[1] * width_[1]);
  return poly_.evaluate(coords(y, &z), identity_coeff) * std::exp(g);
}

long double TestFunction::operator()(const PointLD& y, const PointLD& z) const {
  if (nvec_ != 2) throw std::invalid_argument("test function needs one argument");
  std::array<long double, kCoordVars> x{};
  for (int j = 0; j < dim_; ++j) {
    x[y_var(j)] = y(j);
    x[z_var(j)] = z(j);
  }
  long double w0 = width_[0], w1 = width_[1];
  long double g = -(y - center_[0].cast<long double>()).squaredNorm() / (2 * w0 * w0) -
                  (z - center_[1].cast<long double>()).squaredNorm() / (2 * w1 * w1);
  return poly_.evaluate(x, [](double c) { return static_cast<long double>(c); }) * std::exp(g);
}

TestFunction TestFunction::derivative(std::size_t var) const {
  bool is_z = var >= static_cast<std::size_t>(kMaxDim);
  int v = is_z ? 1 : 0;
  int j = static_cast<int>(var) - (is_z ? kMaxDim : 0);
  if (j >= dim_ || v >= nvec_) return TestFunction(dim_, nvec_, NumPoly(), center_, width_);
  // d/dx (P e^Q) = (dP/dx - P (x - c)/w^2) e^Q
  double w2 = width_[v] * width_[v];
  NumPoly shift = NumPoly::variable(var) - NumPoly(center_[v](j));
  NumPoly p = poly_.derivative(var) - (poly_ * shift).scaled(1.0 / w2);
  return TestFunction(dim_, nvec_, p, center_, width_);
}

TestFunction TestFunction::times(const NumPoly& p) const { return {dim_, nvec_, poly_ * p, center_, width_}; }

TestFunction TestFunction::operator+(const TestFunction& o) const {
  if (o.dim_ != dim_ || o.nvec_ != nvec_ || o.width_ != width_ || o.center_[0] != center_[0] ||
      (nvec_ == 2 && o.center_[1] != center_[1]))
    throw std::invalid_argument("test functions with different Gaussians cannot be added");
  return {dim_, nvec_, poly_ + o.poly_, center_, width_};
}

TestFunction TestFunction::scaled(double c) const { return {dim_, nvec_, poly_.scaled(c), center_, width_}; }

TestFunction TestFunction::laplacian(bool z) const {
  TestFunction out(dim_, nvec_, NumPoly(), center_, width_);
  for (int j = 0; j < dim_; ++j) {
    std::size_t v = z ? z_var(j) : y_var(j);
    out = out + derivative(v).derivative(v);
  }
  return out;
}

TestFunction TestFunction::mixed() const {
  TestFunction out(dim_, nvec_, NumPoly(), center_, width_);
  for (int j = 0; j < dim_; ++j) out = out + derivative(z_var(j)).derivative(y_var(j));
  return out;
}

double pi_apply(const GroupElement& g, double lambda, const TestFunction& f, const Point& x) {
  double k;
  Point u = g.inverse().act(x, k);
  return std::pow(k, 0.5 * f.dim() + lambda) * f(u);
}

double pi_apply(const GroupElement& g, double lambda, double mu, const TestFunction& f, const Point& y,
                const Point& z) {
  GroupElement inv = g.inverse();
  double ky, kz;
  Point u = inv.act(y, ky), v = inv.act(z, kz);
  double rho = 0.5 * f.dim();
  return std::pow(ky, rho + lambda) * std::pow(kz, rho + mu) * f(u, v);
}

TestFunction apply(const CoordOperator& op, const TestFunction& f, const Bindings& values) {
  std::array<double, kParamCount> vals{};
  std::array<bool, kParamCount> bound{};
  for (const auto& [p, v] : values) {
    vals[static_cast<std::size_t>(p)] = v.get_d();
    bound[static_cast<std::size_t>(p)] = true;
  }
  vals[static_cast<std::size_t>(Param::Dim)] = op.dim();
  bound[static_cast<std::size_t>(Param::Dim)] = true;
  TestFunction out(f.dim(), f.nvec(), NumPoly(), {f.center(0), f.center(1)}, {f.width(0), f.width(1)});
  for (const auto& [alpha, coeff] : op.terms()) {
    NumPoly a;
    for (const auto& [m, c] : coeff.terms()) {
      for (const auto& [pm, s] : c.terms())
        for (std::size_t i = 0; i < kParamCount; ++i)
          if (pm.e[i] && !bound[i]) throw std::invalid_argument("unbound parameter in operator coefficient");
      a.add_term(m, evaluate_double(c, vals));
    }
    TestFunction d = f;
    for (std::size_t v = 0; v < kCoordVars; ++v)
      for (unsigned n = 0; n < alpha.e[v]; ++n) d = d.derivative(v);
    out = out + d.times(a);
  }
  return out;
}

double integrate_2d(const std::function<double(const Point&)>& f, const Point& center, double half_width, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  if (center.size() != 2) throw std::invalid_argument("integrate_2d works in dimension 2");
  auto outer = [&](double x0) {
    auto inner = [&](double x1) {
      Point p(2);
      p << x0, x1;
      return f(p);
    };
    return gauss_kronrod<double, 31>::integrate(inner, center(1) - half_width, center(1) + half_width, 12, tol);
  };
  return gauss_kronrod<double, 31>::integrate(outer, center(0) - half_width, center(0) + half_width, 12, tol);
}

DualityResult duality_residual(const GroupElement& g, double lambda, const TestFunction& phi, const TestFunction& psi) {
  if (phi.dim() != 2 || psi.dim() != 2 || phi.nvec() != 1 || psi.nvec() != 1)
    throw std::invalid_argument("duality check needs single-variable test functions in d = 2");
  // The integrand vanishes to all orders at the singular point, so the
  // excluded ball contributes nothing.
  auto safe = [](auto&& fn) {
    return [fn](const Point& x) {
      try {
        return fn(x);
      } catch (const SingularPoint&) {
        return 0.0;
      }
    };
  };
  GroupElement ginv = g.inverse();
  DualityResult r;
  r.lhs = integrate_2d(safe([&](const Point& x) { return pi_apply(g, lambda, phi, x) * psi(x); }), psi.center(0),
                       9 * psi.width(0));
  r.rhs = integrate_2d(safe([&](const Point& x) { return phi(x) * pi_apply(ginv, -lambda, psi, x); }), phi.center(0),
                       9 * phi.width(0));
  r.reference = integrate_2d([&](const Point& x) { return phi(x) * psi(x); }, phi.center(0), 9 * phi.width(0));
  r.residual = std::abs(r.lhs - r.rhs) / std::abs(r.reference);
  return r;
}

}  // namespace confcov
