#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "confcov/conformal_group.hpp"
#include "confcov/operators.hpp"
#include "confcov/test_function.hpp"

namespace confcov {

// Weights of the central stencil x_i = i*h, i = -p..p, for the m-th
// derivative (Fornberg's recursion), without the 1/h^m factor.
std::vector<double> fornberg_weights(int m, int p);
// Half width of the order-8 central stencil for the m-th derivative.
int central_half_width(int m);
// h = eps^(1/(8+m)) * scale
double fd_step(int m, double scale);

// Constant-coefficient bidifferential operator sum c_{alpha,gamma} d_y^alpha d_z^gamma.
struct DerivTerm {
  std::array<int, kMaxDim> alpha{};
  std::array<int, kMaxDim> gamma{};
  double coeff = 0;
  int order() const;
};
struct NumericBidiff {
  int dim = 2;
  std::vector<DerivTerm> terms;
};

// symbol(op, dim) with lambda, mu bound, expanded into monomial derivatives.
NumericBidiff numeric_bidiff(const OperatorExpr& op, int dim, const Scalar& lambda, const Scalar& mu);
// Exact application followed by restriction to the diagonal.
double apply_on_diagonal(const NumericBidiff& D, const TestFunction& f, const Point& x);

// max_x |D((pi_lambda(g) (x) pi_mu(g)) f)(x) - pi_nu(g)(D f)(x)| / max_x |pi_nu(g)(D f)(x)|
// with nu = lambda + mu + rho + 2k.  Throws SingularPoint for a sample on the
// singular locus and StencilTooWide when a stencil reaches it.
double covariance_residual(const OperatorExpr& op, const Scalar& lambda, const Scalar& mu, unsigned k,
                           const GroupElement& g, const TestFunction& f, const std::vector<Point>& points);

struct CovarianceCell {
  std::string operator_name;
  GroupClass group_class;
  Scalar lambda, mu;
  std::size_t points = 0;
  std::size_t rejected = 0;
  double max_residual = 0;
};

struct CovarianceSweep {
  std::vector<CovarianceCell> cells;
  double max_residual() const;
};

// One random element and test function per sample point; points are drawn
// near the image of the test function's support.
CovarianceSweep covariance_sweep(const std::string& name, const OperatorExpr& op, unsigned k,
                                 const std::vector<std::pair<Scalar, Scalar>>& pairs,
                                 const std::vector<GroupClass>& classes, std::size_t points, std::uint64_t seed,
                                 int dim = 2);

std::vector<std::pair<Scalar, Scalar>> default_parameter_pairs();
std::vector<GroupClass> default_group_classes();

struct ConventionVerdict {
  std::map<RConvention, double> max_residual;
  std::vector<RConvention> passing;
  double tolerance = 1e-6;
};
// Covariance of D^(1) under both R-coefficient conventions.
ConventionVerdict adjudicate_convention(std::size_t points, std::uint64_t seed, double tolerance = 1e-6);

}  // namespace confcov
