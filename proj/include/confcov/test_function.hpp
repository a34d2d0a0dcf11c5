#pragma once

#include <array>
#include <functional>
#include <random>

#include "confcov/conformal_group.hpp"
#include "confcov/coordinate_oracle.hpp"
#include "confcov/poly.hpp"

namespace confcov {

// Same variable layout as the coordinate oracle: y_j at j, z_j at 5 + j.
using NumPoly = Poly<double, kCoordVars>;

// P(y, z) * exp(-|y - a|^2 / (2 w_y^2) - |z - b|^2 / (2 w_z^2)); with one
// vector variable only y is used.
class TestFunction {
 public:
  TestFunction() = default;
  TestFunction(int dim, int nvec, NumPoly poly, std::array<Point, 2> center, std::array<double, 2> width);

  static TestFunction random(std::mt19937_64& rng, int dim, int nvec, int degree = 2, double width = 0.7);

  int dim() const { return dim_; }
  int nvec() const { return nvec_; }
  const NumPoly& poly() const { return poly_; }
  const Point& center(int v) const { return center_[v]; }
  double width(int v) const { return width_[v]; }

  double operator()(const Point& y) const;
  double operator()(const Point& y, const Point& z) const;
  long double operator()(const PointLD& y, const PointLD& z) const;

  // Exact derivative in coordinate variable `var` (y_j = j, z_j = 5 + j).
  TestFunction derivative(std::size_t var) const;
  TestFunction times(const NumPoly& p) const;
  TestFunction operator+(const TestFunction& o) const;
  TestFunction scaled(double c) const;
  TestFunction laplacian(bool z) const;
  TestFunction mixed() const;

 private:
  int dim_ = 2, nvec_ = 1;
  NumPoly poly_;
  std::array<Point, 2> center_;
  std::array<double, 2> width_{1, 1};
};

// pi_lambda(g) f (x) = kappa(g^-1, x)^(rho + lambda) f(g^-1 x)
double pi_apply(const GroupElement& g, double lambda, const TestFunction& f, const Point& x);
// (pi_lambda(g) (x) pi_mu(g)) f (y, z)
double pi_apply(const GroupElement& g, double lambda, double mu, const TestFunction& f, const Point& y,
                const Point& z);

// Coordinate operator with parameters bound, applied exactly.
TestFunction apply(const CoordOperator& op, const TestFunction& f, const Bindings& values);

// Adaptive Gauss-Kronrod over a box around the Gaussian, d = 2 only.
double integrate_2d(const std::function<double(const Point&)>& f, const Point& center, double half_width,
                    double tol = 1e-11);

struct DualityResult {
  double lhs = 0, rhs = 0, reference = 0, residual = 0;
};
// |int pi_lambda(g) phi psi - int phi pi_-lambda(g^-1) psi| / |int phi psi|, d = 2.
DualityResult duality_residual(const GroupElement& g, double lambda, const TestFunction& phi, const TestFunction& psi);

}  // namespace confcov
