#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "confcov/operators.hpp"

namespace confcov {

enum class QuadMethod { Adaptive, MonteCarlo, Radial };
std::string to_string(QuadMethod m);

struct QuadReport {
  double estimate = 0;
  double error_estimate = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t seed = 0;
  QuadMethod method = QuadMethod::Adaptive;
};

// beta = (beta1, beta2, beta3) weights |sigma - tau|, |tau|, |sigma| respectively.
using Beta3 = std::array<double, 3>;

// Integral over the unit sphere of E x E (dimension 2d - 1) of
//   rho_{i_1} ... rho_{i_n} |sigma|^beta3 |tau|^beta2 |sigma - tau|^beta1,
// where rho = (sigma_1..sigma_d, tau_1..tau_d) and indices are 1-based.
// Adaptive handles monomials of degree <= 2 through a two-angle reduction;
// MonteCarlo handles any monomial, with `budget` samples.
// Throws NotConvergent if some beta_j <= -d.
QuadReport sphere_quad(const Beta3& beta, int dim, const std::vector<int>& monomial, QuadMethod method,
                       std::uint64_t budget = 1 << 22, std::uint64_t seed = 1);

// Monte-Carlo estimates of several monomials from one sample set.
struct MomentEstimate {
  std::vector<int> monomial;
  double estimate = 0;
  double std_error = 0;
};
std::vector<MomentEstimate> sphere_moments(const Beta3& beta, int dim, const std::vector<std::vector<int>>& monomials,
                                           std::uint64_t budget, std::uint64_t seed);

// Worker threads for Monte-Carlo blocks: CONFCOV_THREADS, else hardware
// concurrency.  Results do not depend on it.
unsigned worker_count();

// pi^d / (2 sqrt 2)^(3d) * Gamma(2d)/Gamma(3d/2) * prod_j Gamma((b_j+d)/2)/Gamma((-b_j-d)/2)
// Throws NotOnCriticalPlane unless sum(beta) = -2d.
HighFloat c0_closed_form(const std::array<Scalar, 3>& beta0, int dim);

struct ResidueRatioReport {
  std::array<Scalar, 3> beta0;
  int dim = 3;
  Scalar lambda, mu;  // (lambda_2, lambda_3)
  double A = 0, B = 0, C = 0;  // sigma-block, tau-block and cross-block diagonal
  double A_err = 0, B_err = 0, C_err = 0;
  // Largest |off-diagonal| and largest spread of a block diagonal, in
  // standard errors.
  double max_offdiag_sigmas = 0;
  double max_diag_spread_sigmas = 0;
  std::array<double, 3> measured{};  // (A, 2C, B)
  std::array<double, 3> expected{};  // D^(1) coefficient triple
  double max_ratio_deviation = 0;    // after fitting one overall constant
  bool isotropic = false;
  bool ratios_match = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};
// a_ij for the k = 1 residue on H_1 (sum(beta0) = -2d - 2, every beta_j > -d).
ResidueRatioReport residue_ratio_check_k1(const std::array<Scalar, 3>& beta0, int dim, std::uint64_t budget,
                                          std::uint64_t seed, double ratio_tolerance = 0.03,
                                          double isotropy_sigmas = 3.0);

// int_E (1 + |x|^2)^(-2d) dx by radial quadrature, and its closed form
// pi^(d/2) Gamma(3d/2) / Gamma(2d).
QuadReport radial_integral(int dim);
HighFloat radial_integral_closed_form(int dim);

// 2 pi^d / Gamma(d)
HighFloat sphere_volume(int dim);

// f0(x1, x2, x3) = (1+|x1|^2)^(-(b2+b3)/2) (1+|x2|^2)^(-(b3+b1)/2) (1+|x3|^2)^(-(b1+b2)/2)
double f0_value(const Beta3& beta, const std::vector<double>& x1, const std::vector<double>& x2,
                const std::vector<double>& x3);
// (sqrt(pi)/(2 sqrt 2))^(3d) Gamma(sum b + 2d) prod Gamma((b_j+d)/2) / prod Gamma((b_i+b_j+d)/2)
HighFloat f0_closed_form(const std::array<Scalar, 3>& beta, int dim);

}  // namespace confcov
