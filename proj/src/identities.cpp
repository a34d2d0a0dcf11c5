#include "confcov/identities.hpp"

#include <algorithm>
#include <random>

#include "confcov/errors.hpp"
#include "confcov/test_function.hpp"

namespace confcov {

bool IdentityReport::passed() const {
  return !stats.empty() && std::all_of(stats.begin(), stats.end(), [](const IdentityStat& s) { return s.passed(); });
}

namespace {

constexpr std::size_t kMaxRedraws = 1000;

template <class Draw>
void run(IdentityStat& st, std::size_t n, Draw&& draw) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t tries = 0;; ++tries) {
      if (tries == kMaxRedraws) throw Error(st.name + ": too many singular draws");
      try {
        st.max_residual = std::max(st.max_residual, draw());
        ++st.cases;
        break;
      } catch (const SingularPoint&) {
        ++st.rejected;
      }
    }
  }
}

}  // namespace

IdentityReport group_identities(std::size_t n, std::size_t duality_cases, std::uint64_t seed, int dim,
                                double tolerance, double duality_tolerance) {
  IdentityReport rep;
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(ss);

  IdentityStat cocycle{"cocycle", 0, 0, 0, tolerance};
  run(cocycle, n, [&] {
    GroupElement g1 = random_element(rng, dim, GroupClass::Mixed), g2 = random_element(rng, dim, GroupClass::Mixed);
    Point x = random_point(rng, dim, 1.5);
    return cocycle_residual(g1, g2, x);
  });
  rep.stats.push_back(cocycle);

  IdentityStat distance{"distance", 0, 0, 0, tolerance};
  run(distance, n, [&] {
    GroupElement g = random_element(rng, dim, GroupClass::Mixed);
    Point x = random_point(rng, dim, 1.5), y = random_point(rng, dim, 1.5);
    return distance_identity_residual(g, x, y);
  });
  rep.stats.push_back(distance);

  IdentityStat stereo{"stereographic", 0, 0, 0, tolerance};
  run(stereo, n, [&] {
    Point x = random_point(rng, dim, 1.5), y = random_point(rng, dim, 1.5);
    return stereographic_distance_residual(x, y);
  });
  rep.stats.push_back(stereo);

  IdentityStat duality{"duality", 0, 0, 0, duality_tolerance};
  std::uniform_real_distribution<double> lam(-1.0, 1.0);
  run(duality, duality_cases, [&] {
    GroupElement g = random_element(rng, 2, GroupClass::InvertComposed);
    double l = lam(rng);
    TestFunction phi = TestFunction::random(rng, 2, 1, 2, 0.7), psi = TestFunction::random(rng, 2, 1, 2, 0.7);
    return duality_residual(g, l, phi, psi).residual;
  });
  rep.stats.push_back(duality);
  return rep;
}

}  // namespace confcov
