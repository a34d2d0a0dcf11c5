#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confcov/conformal_group.hpp"

namespace confcov {

struct IdentityStat {
  std::string name;
  std::size_t cases = 0;
  std::size_t rejected = 0;  // draws that hit a singular locus and were redrawn
  double max_residual = 0;
  double tolerance = 0;
  bool passed() const { return cases > 0 && max_residual <= tolerance; }
};

struct IdentityReport {
  std::vector<IdentityStat> stats;  // cocycle, distance, stereographic, duality
  bool passed() const;
};

// Random cases: cocycle and distance over mixed words of all four primitive
// kinds in dimension `dim`; stereographic pairs; duality at d = 2 with
// single-inversion words and random lambda in [-1, 1].
IdentityReport group_identities(std::size_t n, std::size_t duality_cases, std::uint64_t seed, int dim = 2,
                                double tolerance = 1e-10, double duality_tolerance = 1e-6);

}  // namespace confcov
