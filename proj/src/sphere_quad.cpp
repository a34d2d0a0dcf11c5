#include "confcov/sphere_quad.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace confcov {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

double sphere_area(int n) {  // area of S^(n-1) in R^n
  return 2 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

void check_convergent(const Beta3& beta, int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
  for (double b : beta)
    if (!(b > -dim)) throw NotConvergent("beta_j <= -d");
}

void check_indices(const std::vector<int>& monomial, int dim) {
  for (int i : monomial)
    if (i < 1 || i > 2 * dim) throw std::invalid_argument("monomial index outside 1..2d");
}

// ---- adaptive: sigma = cos(t) u, tau = sin(t) v, phi = angle(u, v) ----

// Degree <= 2 monomials reduce by isotropy to a weight in (theta, phi).
enum class Weight { Zero, One, SigmaSq, TauSq, Cross };

Weight reduce_monomial(const std::vector<int>& m, int dim) {
  if (m.empty()) return Weight::One;
  if (m.size() % 2) return Weight::Zero;
  if (m.size() > 2) throw std::invalid_argument("adaptive quadrature supports monomials of degree <= 2");
  int i = m[0] - 1, j = m[1] - 1;
  if (i % dim != j % dim) return Weight::Zero;
  bool si = i < dim, sj = j < dim;
  if (si && sj) return Weight::SigmaSq;
  if (!si && !sj) return Weight::TauSq;
  return Weight::Cross;
}

QuadReport adaptive_quad(const Beta3& beta, int dim, const std::vector<int>& monomial) {
  QuadReport rep;
  rep.method = QuadMethod::Adaptive;
  Weight w = reduce_monomial(monomial, dim);
  if (w == Weight::Zero) return rep;
  const double b1 = beta[0], b2 = beta[1], b3 = beta[2];
  const double inv_d = 1.0 / dim;
  std::uint64_t evals = 0;

  auto weight = [&](double c, double s, double cphi) {
    switch (w) {
      case Weight::SigmaSq:
        return c * c * inv_d;
      case Weight::TauSq:
        return s * s * inv_d;
      case Weight::Cross:
        return s * c * cphi * inv_d;
      default:
        return 1.0;
    }
  };
  // |sigma - tau|^2 = (c - s)^2 + 4 s c sin^2(phi/2), with |c - s| = gap passed in exactly.
  auto radial = [&](double c, double s) { return std::pow(c, b3 + dim - 1) * std::pow(s, b2 + dim - 1); };
  auto dist = [&](double gap, double c, double s, double phi) {
    return std::hypot(gap, 2 * std::sqrt(s * c) * std::sin(0.5 * phi));
  };

  boost::math::quadrature::tanh_sinh<double> ts(12);
  const double tol_in = 1e-11, tol_out = 1e-10;
  double err_sum = 0;

  auto inner = [&](double gap, double c, double s) {
    ++evals;
    if (dim == 1) {
      // u, v in {+1, -1}: phi is 0 or pi, each half of the prefactor 2 * 2.
      return 0.5 * radial(c, s) * (std::pow(gap, b1) * weight(c, s, 1.0) + std::pow(c + s, b1) * weight(c, s, -1.0));
    }
    auto f = [&](double phi) {
      ++evals;
      double sp = std::sin(phi);
      return std::pow(dist(gap, c, s, phi), b1) * (dim == 2 ? 1.0 : std::pow(sp, dim - 2)) *
             weight(c, s, std::cos(phi));
    };
    double split = std::min(0.5 * kPi, 4 * gap);
    double e1 = 0, e2 = 0;
    double v = ts.integrate(f, 0.0, split, tol_in, &e1) + ts.integrate(f, split, kPi, tol_in, &e2);
    return radial(c, s) * v;
  };

  // theta in four pieces, each parametrized by its offset t in [0, pi/8] from
  // the singular end.  Pieces next to pi/4 drop t below a cutoff where the
  // neglected mass is under 1e-20.
  const double q = 0.25 * kPi, cut = std::min(1e-30, std::pow(1e-20, 1.0 / (b1 + dim)));
  const double r2 = std::sqrt(2.0);
  double total = 0;
  for (int piece = 0; piece < 4; ++piece) {
    auto g = [&](double t) {
      double c, s, gap;
      switch (piece) {
        case 0:  // theta = t
          c = std::cos(t), s = std::sin(t), gap = c - s;
          break;
        case 1:  // theta = pi/4 - t
          if (t < cut) return 0.0;
          c = std::cos(q - t), s = std::sin(q - t), gap = r2 * std::sin(t);
          break;
        case 2:  // theta = pi/4 + t
          if (t < cut) return 0.0;
          c = std::cos(q + t), s = std::sin(q + t), gap = r2 * std::sin(t);
          break;
        default:  // theta = pi/2 - t
          c = std::sin(t), s = std::cos(t), gap = s - c;
      }
      return inner(gap, c, s);
    };
    double err = 0;
    total += ts.integrate(g, 0.0, 0.5 * q, tol_out, &err);
    err_sum += err;
  }
  double pre = sphere_area(dim) * (dim >= 2 ? sphere_area(dim - 1) : 2.0);
  rep.estimate = pre * total;
  rep.error_estimate = pre * err_sum;
  rep.evaluations = evals;
  return rep;
}

// ---- Monte-Carlo: four strata, uniform plus one per singular set ----

constexpr std::uint64_t kBlock = 1 << 14;
constexpr int kStrata = 4;

struct Mixture {
  int dim;
  Beta3 beta;
  std::array<double, kStrata> a{};     // density exponent s^(-a) per stratum
  std::array<double, kStrata> norm{};  // its normalization
  double uniform;

  Mixture(const Beta3& b, int d) : dim(d), beta(b) {
    double area = sphere_area(d);
    uniform = 1 / sphere_area(2 * d);
    // stratum 1: sigma -> 0 (beta3), 2: tau -> 0 (beta2), 3: sigma -> tau (beta1)
    const std::array<double, kStrata> exps{0, b[2], b[1], b[0]};
    for (int c = 1; c < kStrata; ++c) {
      a[c] = exps[c] < 0 ? std::min(-exps[c], d - 0.25) : 0.0;
      norm[c] = area * area * boost::math::beta(0.5 * (d - a[c]), 0.5 * d) / 2;
    }
  }

  double density(const double* sig, const double* tau) const {
    double ss = 0, tt = 0, dd = 0;
    for (int j = 0; j < dim; ++j) {
      ss += sig[j] * sig[j];
      tt += tau[j] * tau[j];
      dd += (sig[j] - tau[j]) * (sig[j] - tau[j]);
    }
    const std::array<double, kStrata> s2{0, ss, tt, 0.5 * dd};
    double p = uniform;
    for (int c = 1; c < kStrata; ++c) p += a[c] == 0 ? uniform : std::pow(s2[c], -0.5 * a[c]) / norm[c];
    return p / kStrata;
  }

  double integrand(const double* sig, const double* tau) const {
    double ss = 0, tt = 0, dd = 0;
    for (int j = 0; j < dim; ++j) {
      ss += sig[j] * sig[j];
      tt += tau[j] * tau[j];
      dd += (sig[j] - tau[j]) * (sig[j] - tau[j]);
    }
    return std::pow(dd, 0.5 * beta[0]) * std::pow(tt, 0.5 * beta[1]) * std::pow(ss, 0.5 * beta[2]);
  }

  void sample(int stratum, std::mt19937_64& rng, double* sig, double* tau) const {
    std::normal_distribution<double> n;
    auto unit = [&](double* v) {
      double r = 0;
      do {
        r = 0;
        for (int j = 0; j < dim; ++j) {
          v[j] = n(rng);
          r += v[j] * v[j];
        }
      } while (r == 0);
      r = std::sqrt(r);
      for (int j = 0; j < dim; ++j) v[j] /= r;
    };
    if (stratum == 0 || a[stratum] == 0) {
      double v[2 * kMaxDim];
      double r = 0;
      do {
        r = 0;
        for (int j = 0; j < 2 * dim; ++j) {
          v[j] = n(rng);
          r += v[j] * v[j];
        }
      } while (r == 0);
      r = std::sqrt(r);
      for (int j = 0; j < dim; ++j) {
        sig[j] = v[j] / r;
        tau[j] = v[dim + j] / r;
      }
      return;
    }
    // |P|^2 ~ Beta((d - a)/2, d/2)
    std::gamma_distribution<double> ga(0.5 * (dim - a[stratum])), gb(0.5 * dim);
    double x = ga(rng), y = gb(rng);
    double u = x / (x + y);
    double P[kMaxDim], Q[kMaxDim];
    unit(P);
    unit(Q);
    double sp = std::sqrt(u), sq = std::sqrt(1 - u);
    for (int j = 0; j < dim; ++j) {
      P[j] *= sp;
      Q[j] *= sq;
    }
    const double h = std::sqrt(0.5);
    for (int j = 0; j < dim; ++j) {
      switch (stratum) {
        case 1:
          sig[j] = P[j], tau[j] = Q[j];
          break;
        case 2:
          sig[j] = Q[j], tau[j] = P[j];
          break;
        default:
          sig[j] = h * (Q[j] + P[j]), tau[j] = h * (Q[j] - P[j]);
      }
    }
  }
};

// A moment is a signed sum of monomials.
using Moment = std::vector<std::pair<double, std::vector<int>>>;

struct BlockSums {
  std::vector<double> sum, sumsq;
};

std::vector<MomentEstimate> run_moments(const Beta3& beta, int dim, const std::vector<Moment>& moments,
                                        std::uint64_t budget, std::uint64_t seed) {
  check_convergent(beta, dim);
  for (const auto& m : moments)
    for (const auto& [c, mono] : m) check_indices(mono, dim);
  const Mixture mix(beta, dim);
  const std::uint64_t per_stratum_blocks = std::max<std::uint64_t>(1, (budget + kStrata * kBlock - 1) / (kStrata * kBlock));
  const std::uint64_t nblocks = per_stratum_blocks * kStrata;
  const std::size_t nm = moments.size();
  std::vector<BlockSums> blocks(nblocks);

  auto run_block = [&](std::uint64_t b) {
    int stratum = static_cast<int>(b % kStrata);
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(ss);
    BlockSums out{std::vector<double>(nm, 0.0), std::vector<double>(nm, 0.0)};
    double sig[kMaxDim], tau[kMaxDim], rho[2 * kMaxDim];
    for (std::uint64_t n = 0; n < kBlock; ++n) {
      mix.sample(stratum, rng, sig, tau);
      double wgt = mix.integrand(sig, tau) / mix.density(sig, tau);
      if (!std::isfinite(wgt)) wgt = 0;  // exactly on a singular set: measure zero
      for (int j = 0; j < dim; ++j) {
        rho[j] = sig[j];
        rho[dim + j] = tau[j];
      }
      for (std::size_t k = 0; k < nm; ++k) {
        double v = 0;
        for (const auto& [c, mono] : moments[k]) {
          double p = c;
          for (int i : mono) p *= rho[i - 1];
          v += p;
        }
        v *= wgt;
        out.sum[k] += v;
        out.sumsq[k] += v * v;
      }
    }
    blocks[b] = std::move(out);
  };

  unsigned workers = std::min<std::uint64_t>(worker_count(), nblocks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b; (b = next++) < nblocks;) run_block(b);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Reduction in block order.  Each stratum has weight 1/4 and
  // per_stratum_blocks * kBlock samples.
  const double n_s = static_cast<double>(per_stratum_blocks * kBlock);
  std::vector<MomentEstimate> res(nm);
  for (std::size_t k = 0; k < nm; ++k) {
    std::array<double, kStrata> s{}, s2{};
    for (std::uint64_t b = 0; b < nblocks; ++b) {
      s[b % kStrata] += blocks[b].sum[k];
      s2[b % kStrata] += blocks[b].sumsq[k];
    }
    double est = 0, var = 0;
    for (int c = 0; c < kStrata; ++c) {
      double mean = s[c] / n_s;
      double v = std::max(0.0, s2[c] / n_s - mean * mean) * n_s / (n_s - 1);
      est += mean / kStrata;
      var += v / (n_s * kStrata * kStrata);
    }
    res[k].estimate = est;
    res[k].std_error = std::sqrt(var);
    if (moments[k].size() == 1) res[k].monomial = moments[k][0].second;
  }
  return res;
}

HighFloat hf_pi() { return boost::math::constants::pi<HighFloat>(); }

HighFloat hf(const Scalar& q) { return to_high(q); }

}  // namespace

std::string to_string(QuadMethod m) {
  switch (m) {
    case QuadMethod::Adaptive:
      return "adaptive";
    case QuadMethod::MonteCarlo:
      return "monte_carlo";
    case QuadMethod::Radial:
      return "radial";
  }
  return "?";
}

unsigned worker_count() {
  if (const char* env = std::getenv("CONFCOV_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

QuadReport sphere_quad(const Beta3& beta, int dim, const std::vector<int>& monomial, QuadMethod method,
                       std::uint64_t budget, std::uint64_t seed) {
  check_convergent(beta, dim);
  check_indices(monomial, dim);
  switch (method) {
    case QuadMethod::Adaptive:
      return adaptive_quad(beta, dim, monomial);
    case QuadMethod::MonteCarlo: {
      auto r = run_moments(beta, dim, {Moment{{1.0, monomial}}}, budget, seed);
      QuadReport rep;
      rep.method = method;
      rep.estimate = r[0].estimate;
      rep.error_estimate = r[0].std_error;
      rep.seed = seed;
      std::uint64_t per = std::max<std::uint64_t>(1, (budget + kStrata * kBlock - 1) / (kStrata * kBlock));
      rep.evaluations = per * kStrata * kBlock;
      return rep;
    }
    case QuadMethod::Radial:
      throw std::invalid_argument("radial quadrature does not apply to sphere integrals");
  }
  throw std::logic_error("unknown quadrature method");
}

std::vector<MomentEstimate> sphere_moments(const Beta3& beta, int dim, const std::vector<std::vector<int>>& monomials,
                                           std::uint64_t budget, std::uint64_t seed) {
  std::vector<Moment> ms;
  for (const auto& m : monomials) ms.push_back({{1.0, m}});
  return run_moments(beta, dim, ms, budget, seed);
}

HighFloat c0_closed_form(const std::array<Scalar, 3>& beta0, int dim) {
  if (beta0[0] + beta0[1] + beta0[2] != Scalar(-2 * dim)) throw NotOnCriticalPlane("sum(beta) != -2d");
  const HighFloat d = dim;
  HighFloat v = pow(hf_pi(), d) / pow(2 * sqrt(HighFloat(2)), 3 * d) * boost::math::tgamma(2 * d) /
                boost::math::tgamma(3 * d / 2);
  for (const Scalar& b : beta0) {
    HighFloat x = (hf(b) + d) / 2;
    HighFloat den = -x;
    if (den <= 0 && den == floor(den)) return HighFloat(0);
    v *= gamma_checked(x, "Gamma((beta_j + d)/2)") / boost::math::tgamma(den);
  }
  return v;
}

ResidueRatioReport residue_ratio_check_k1(const std::array<Scalar, 3>& beta0, int dim, std::uint64_t budget,
                                          std::uint64_t seed, double ratio_tolerance, double isotropy_sigmas) {
  if (beta0[0] + beta0[1] + beta0[2] != Scalar(-2 * dim - 2)) throw NotOnCriticalPlane("sum(beta) != -2d - 2");
  Beta3 b{beta0[0].get_d(), beta0[1].get_d(), beta0[2].get_d()};
  check_convergent(b, dim);

  ResidueRatioReport rep;
  rep.beta0 = beta0;
  rep.dim = dim;
  rep.seed = seed;
  LambdaTriple l = beta_to_lambda({ParamPoly(beta0[0]), ParamPoly(beta0[1]), ParamPoly(beta0[2])});
  Bindings at{{Param::Dim, Scalar(dim)}};
  rep.lambda = evaluate(l.second, at);
  rep.mu = evaluate(l.third, at);

  // Moments: the three block diagonals, every off-diagonal entry, and the
  // differences of each diagonal entry from the first of its block.
  std::vector<Moment> ms;
  auto entry = [](int i, int j) { return Moment{{1.0, {i, j}}}; };
  ms.push_back(entry(1, 1));
  ms.push_back(entry(dim + 1, dim + 1));
  ms.push_back(entry(1, dim + 1));
  std::vector<std::size_t> offdiag, spread;
  for (int i = 1; i <= 2 * dim; ++i)
    for (int j = i + 1; j <= 2 * dim; ++j) {
      if (j == i + dim) continue;  // cross-block diagonal
      offdiag.push_back(ms.size());
      ms.push_back(entry(i, j));
    }
  for (int blk = 0; blk < 3; ++blk)
    for (int i = 2; i <= dim; ++i) {
      int ri = blk == 1 ? dim + i : i, ci = blk == 0 ? i : dim + i;
      int r1 = blk == 1 ? dim + 1 : 1, c1 = blk == 0 ? 1 : dim + 1;
      spread.push_back(ms.size());
      ms.push_back({{1.0, {ri, ci}}, {-1.0, {r1, c1}}});
    }
  auto est = run_moments(b, dim, ms, budget, seed);
  rep.samples = std::max<std::uint64_t>(1, (budget + kStrata * kBlock - 1) / (kStrata * kBlock)) * kStrata * kBlock;
  rep.A = est[0].estimate, rep.A_err = est[0].std_error;
  rep.B = est[1].estimate, rep.B_err = est[1].std_error;
  rep.C = est[2].estimate, rep.C_err = est[2].std_error;
  for (std::size_t k : offdiag)
    rep.max_offdiag_sigmas = std::max(rep.max_offdiag_sigmas, std::abs(est[k].estimate) / est[k].std_error);
  for (std::size_t k : spread)
    rep.max_diag_spread_sigmas = std::max(rep.max_diag_spread_sigmas, std::abs(est[k].estimate) / est[k].std_error);
  rep.isotropic = rep.max_offdiag_sigmas <= isotropy_sigmas && rep.max_diag_spread_sigmas <= isotropy_sigmas;

  // D^(1) coefficients of |xi|^2, <xi,eta>, |eta|^2 in the validated convention.
  SymbolPoly sym = symbol(build_OR_Dk(1, RConvention::Display), dim);
  Bindings lm{{Param::Lambda, rep.lambda}, {Param::Mu, rep.mu}, {Param::Dim, Scalar(dim)}};
  auto coeff = [&](unsigned a, unsigned bb, unsigned c) {
    ParamRat r = sym.coefficient(a, bb, c).substitute(lm);
    return Scalar(evaluate(r.num(), lm) / evaluate(r.den(), lm)).get_d();
  };
  rep.expected = {coeff(1, 0, 0), coeff(0, 1, 0), coeff(0, 0, 1)};
  rep.measured = {rep.A, 2 * rep.C, rep.B};
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += rep.measured[i] * rep.expected[i];
    den += rep.expected[i] * rep.expected[i];
  }
  double scale = num / den;
  for (int i = 0; i < 3; ++i)
    rep.max_ratio_deviation =
        std::max(rep.max_ratio_deviation, std::abs(rep.measured[i] - scale * rep.expected[i]) / std::abs(scale * rep.expected[i]));
  rep.ratios_match = rep.max_ratio_deviation <= ratio_tolerance;
  return rep;
}

QuadReport radial_integral(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
  boost::math::quadrature::exp_sinh<double> es;
  std::uint64_t evals = 0;
  auto f = [&](double r) {
    ++evals;
    if (r > 1e30) return 0.0;  // below 1e-90 for every d
    return std::pow(r, dim - 1) * std::pow(1 + r * r, -2.0 * dim);
  };
  QuadReport rep;
  rep.method = QuadMethod::Radial;
  double err = 0;
  double v = es.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14, &err);
  rep.estimate = sphere_area(dim) * v;
  rep.error_estimate = sphere_area(dim) * err;
  rep.evaluations = evals;
  return rep;
}

HighFloat radial_integral_closed_form(int dim) {
  HighFloat d = dim;
  return pow(hf_pi(), d / 2) * boost::math::tgamma(3 * d / 2) / boost::math::tgamma(2 * d);
}

HighFloat sphere_volume(int dim) { return 2 * pow(hf_pi(), HighFloat(dim)) / boost::math::tgamma(HighFloat(dim)); }

double f0_value(const Beta3& beta, const std::vector<double>& x1, const std::vector<double>& x2,
                const std::vector<double>& x3) {
  auto n2 = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  };
  return std::pow(1 + n2(x1), -0.5 * (beta[1] + beta[2])) * std::pow(1 + n2(x2), -0.5 * (beta[2] + beta[0])) *
         std::pow(1 + n2(x3), -0.5 * (beta[0] + beta[1]));
}

HighFloat f0_closed_form(const std::array<Scalar, 3>& beta, int dim) {
  const HighFloat d = dim;
  HighFloat b1 = hf(beta[0]), b2 = hf(beta[1]), b3 = hf(beta[2]);
  HighFloat v = pow(sqrt(hf_pi()) / (2 * sqrt(HighFloat(2))), 3 * d) * gamma_checked(b1 + b2 + b3 + 2 * d, "Gamma(sum beta + 2d)");
  for (const HighFloat& b : {b1, b2, b3}) v *= gamma_checked((b + d) / 2, "Gamma((beta_j + d)/2)");
  for (const HighFloat& s : {b2 + b3, b3 + b1, b1 + b2}) {
    HighFloat x = (s + d) / 2;
    if (x <= 0 && x == floor(x)) return HighFloat(0);
    v /= boost::math::tgamma(x);
  }
  return v;
}

}  // namespace confcov
