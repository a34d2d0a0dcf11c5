#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "confcov/coordinate_oracle.hpp"
#include "confcov/invariant_calculus.hpp"

namespace confcov {

struct OracleFailure {
  std::string generator;
  int dim = 0;
  std::string kernel;
  std::string beta;
};

struct OracleReport {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  std::vector<OracleFailure> failures;  // first few only
  double seconds = 0;
  bool passed() const { return cases > 0 && mismatches == 0; }
};

// Random kernel with 1..max_terms terms, offsets in [-2, 1] and coefficients
// affine in (beta1, beta2, beta3, d).
InvariantKernel random_kernel(std::mt19937_64& rng, int max_terms = 3);
Bindings random_beta(std::mt19937_64& rng);

// For each invariant generator G and each dim: embed(G(K)) == G_coord(embed(K))
// over `cases` random (K, beta).
OracleReport oracle_equivalence_suite(std::size_t cases, const std::vector<int>& dims, std::uint64_t seed);

}  // namespace confcov
