#include "confcov/oracle_suite.hpp"

#include <chrono>

namespace confcov {

namespace {

Scalar small_rational(std::mt19937_64& rng, int range, int max_den) {
  std::uniform_int_distribution<int> n(-range, range), d(1, max_den);
  Scalar q(n(rng), d(rng));
  q.canonicalize();
  return q;
}

std::string bindings_to_string(const Bindings& b) {
  std::string s;
  for (const auto& [p, v] : b) {
    if (!s.empty()) s += ", ";
    s += DefaultNames<Scalar, kParamCount>::get()[static_cast<std::size_t>(p)] + "=" + v.get_str();
  }
  return s;
}

}  // namespace

InvariantKernel random_kernel(std::mt19937_64& rng, int max_terms) {
  std::uniform_int_distribution<int> nterms(1, max_terms), off(-2, 1);
  InvariantKernel k;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    ParamPoly c(small_rational(rng, 4, 3));
    for (Param p : {Param::Beta1, Param::Beta2, Param::Beta3, Param::Dim})
      c += param(p).scaled(small_rational(rng, 2, 2));
    k.add_term(Offset{off(rng), off(rng), off(rng)}, c);
  }
  return k;
}

Bindings random_beta(std::mt19937_64& rng) {
  return {{Param::Beta1, small_rational(rng, 9, 4)},
          {Param::Beta2, small_rational(rng, 9, 4)},
          {Param::Beta3, small_rational(rng, 9, 4)}};
}

OracleReport oracle_equivalence_suite(std::size_t cases, const std::vector<int>& dims, std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  const GenKind gens[] = {GenKind::MulR, GenKind::LapY, GenKind::LapZ, GenKind::MixedR, GenKind::EulYZ, GenKind::EulZY};
  OracleReport report;
  for (int dim : dims)
    for (GenKind kind : gens) {
      std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(dim) << 32) ^ static_cast<std::uint64_t>(kind));
      Generator g{kind, 0};
      for (std::size_t c = 0; c < cases; ++c) {
        InvariantKernel k = random_kernel(rng);
        Bindings beta = random_beta(rng);
        CoordExpr lhs = embed(apply_generator(g, k), dim, beta);
        CoordExpr rhs = apply_generator_coord(g, embed(k, dim, beta));
        ++report.cases;
        if (!equivalent(lhs, rhs)) {
          ++report.mismatches;
          if (report.failures.size() < 5)
            report.failures.push_back({g.name(), dim, k.to_string(), bindings_to_string(beta)});
        }
      }
    }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace confcov
