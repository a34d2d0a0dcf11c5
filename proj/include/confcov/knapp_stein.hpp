#pragma once

#include <vector>

#include "confcov/operators.hpp"

namespace confcov {

struct KnappSteinSample {
  double xi = 0;
  double quadrature = 0;  // Fourier transform of I_nu G at |xi|
  double target = 0;      // c(nu) |xi|^(-nu) G^(xi)
  double relative_error = 0;
  int intervals = 0;  // Bessel half-periods summed before extrapolation converged
};

struct KnappSteinReport {
  double nu = 0;
  int dim = 2;
  double multiplier = 0;  // c(nu)
  std::vector<KnappSteinSample> samples;
  double max_relative_error = 0;
  bool passed = false;
};

// I_nu G(x) = int |x - y|^(-d + nu) exp(-|y|^2) dy as a radial-angle double
// integral, at |x| = r.
double knapp_stein_gaussian(double nu, int dim, double r);

// Compares the Fourier transform of I_nu G, with G(x) = exp(-|x|^2) and
// f^(xi) = int f(x) exp(-i <x, xi>) dx, against c(nu) |xi|^(-nu) pi^(d/2) exp(-|xi|^2/4).
// The radial Hankel transform is summed between Bessel zeros and
// accelerated with Wynn's epsilon algorithm.  Throws NotConvergent unless
// 0 < nu < d.
KnappSteinReport knapp_stein_check(double nu, int dim, const std::vector<double>& xis, double tolerance = 1e-4);

// Wynn epsilon extrapolation of a sequence of partial sums.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace confcov
