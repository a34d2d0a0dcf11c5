#include "confcov/covariance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "confcov/detail/invariant_basis.hpp"
#include "confcov/errors.hpp"
#include "confcov/symbol.hpp"

namespace confcov {

namespace {

constexpr std::size_t kMaxTries = 200;

double to_double(const ParamRat& r) {
  if (!r.is_constant() && !r.is_zero()) throw std::invalid_argument("coefficient is not a constant");
  return r.num().constant_term().get_d();
}

NumericBidiff expand(const SymbolPoly& s, const Bindings& values) {
  NumericBidiff out;
  out.dim = s.dim();
  std::map<std::pair<std::array<int, kMaxDim>, std::array<int, kMaxDim>>, double> acc;
  for (const auto& [m, c] : s.poly().terms()) {
    double coeff = to_double(c.substitute(values));
    const auto& e = detail::invariant_expansion<kExpVars>(s.dim(), xi_var(0), eta_var(0), m.e[0], m.e[1], m.e[2]);
    for (const auto& [mono, v] : e.terms()) {
      std::array<int, kMaxDim> alpha{}, gamma{};
      for (int j = 0; j < kMaxDim; ++j) {
        alpha[j] = mono.e[xi_var(j)];
        gamma[j] = mono.e[eta_var(j)];
      }
      acc[{alpha, gamma}] += coeff * v.get_d();
    }
  }
  for (const auto& [key, c] : acc)
    if (c != 0) out.terms.push_back({key.first, key.second, c});
  return out;
}

TestFunction differentiate(const TestFunction& f, const DerivTerm& t) {
  TestFunction d = f;
  for (int j = 0; j < kMaxDim; ++j) {
    for (int n = 0; n < t.alpha[j]; ++n) d = d.derivative(y_var(j));
    for (int n = 0; n < t.gamma[j]; ++n) d = d.derivative(z_var(j));
  }
  return d;
}

std::vector<long double> fornberg_ld(int m, int p);

struct StencilCache {
  std::map<int, std::vector<long double>> weights;  // by derivative order
  const std::vector<long double>& get(int m) {
    auto it = weights.find(m);
    if (it == weights.end()) it = weights.emplace(m, fornberg_ld(m, central_half_width(m))).first;
    return it->second;
  }
};

std::vector<long double> fornberg_ld(int m, int p) {
  if (m < 0 || p < 0 || 2 * p < m) throw std::invalid_argument("stencil too small for derivative order");
  const int n = 2 * p + 1;
  std::vector<long double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - p;
  std::vector<std::vector<long double>> c(n, std::vector<long double>(m + 1, 0.0L));
  long double c1 = 1, c4 = x[0];
  c[0][0] = 1;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    long double c2 = 1, c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      long double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<long double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

}  // namespace

std::vector<double> fornberg_weights(int m, int p) {
  std::vector<long double> w = fornberg_ld(m, p);
  return {w.begin(), w.end()};
}

int central_half_width(int m) { return m == 0 ? 0 : (m + 1) / 2 - 1 + 4; }

double fd_step(int m, double scale) {
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (8 + m)) * scale;
}

int DerivTerm::order() const {
  int s = 0;
  for (int j = 0; j < kMaxDim; ++j) s += alpha[j] + gamma[j];
  return s;
}

NumericBidiff numeric_bidiff(const OperatorExpr& op, int dim, const Scalar& lambda, const Scalar& mu) {
  return expand(symbol(op, dim), {{Param::Lambda, lambda}, {Param::Mu, mu}, {Param::Dim, dim}});
}

double apply_on_diagonal(const NumericBidiff& D, const TestFunction& f, const Point& x) {
  double s = 0;
  for (const auto& t : D.terms) s += t.coeff * differentiate(f, t)(x, x);
  return s;
}

namespace {

struct Residual {
  double diff = 0, scale = 0;
};

// Both sides at one point; scale is kappa^(rho+nu) sum |c d^alpha f|.
Residual covariance_at(const NumericBidiff& D, const std::vector<TestFunction>& derivs, double lambda, double mu,
                       double nu, const GroupElement& ginv, const TestFunction& f, const Point& x,
                       StencilCache& stencils) {
  const int dim = D.dim;
  const double rho = 0.5 * dim;
  if (ginv.singular_distance(x) < kSingularRadius) throw SingularPoint();

  double k;
  Point u = ginv.act(x, k);
  double rhs = 0, scale = 0;
  for (std::size_t i = 0; i < D.terms.size(); ++i) {
    double v = D.terms[i].coeff * derivs[i](u, u);
    rhs += v;
    scale += std::abs(v);
  }
  double factor = std::pow(k, rho + nu);
  rhs *= factor;
  scale *= factor;

  // Features of f have size w/kappa near x; the conformal factor varies on
  // the scale of the distance to the inversion center.
  double local = std::min(f.width(0), f.width(1)) / k;
  double sd = ginv.singular_distance(x);
  if (std::isfinite(sd)) local = std::min(local, 0.25 * sd);

  // Values are formed in extended precision: the terms of a covariant
  // operator cancel strongly far from the inversion center.
  std::unordered_map<std::uint64_t, long double> cache;
  const PointLD xl = x.cast<long double>();
  auto transformed = [&](int m, const std::array<int, 2 * kMaxDim>& off, double h) {
    std::uint64_t key = static_cast<std::uint64_t>(m);
    for (int v = 0; v < 2 * dim; ++v) key = (key << 4) | static_cast<std::uint64_t>(off[v] + 7);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PointLD y = xl, z = xl;
    for (int j = 0; j < dim; ++j) {
      y(j) += static_cast<long double>(h) * off[j];
      z(j) += static_cast<long double>(h) * off[dim + j];
    }
    long double ky, kz, val;
    try {
      PointLD gy = ginv.act(y, ky), gz = ginv.act(z, kz);
      val = std::pow(ky, static_cast<long double>(rho + lambda)) * std::pow(kz, static_cast<long double>(rho + mu)) *
            f(gy, gz);
    } catch (const SingularPoint&) {
      throw StencilTooWide();
    }
    cache.emplace(key, val);
    return val;
  };

  double lhs = 0;
  for (const auto& t : D.terms) {
    const int m = t.order();
    const double h = fd_step(m, local);
    std::vector<std::pair<int, int>> active;  // (variable slot, order)
    for (int j = 0; j < dim; ++j) {
      if (t.alpha[j]) active.push_back({j, t.alpha[j]});
      if (t.gamma[j]) active.push_back({dim + j, t.gamma[j]});
    }
    std::array<int, 2 * kMaxDim> off{};
    long double sum = 0;
    auto rec = [&](auto&& self, std::size_t idx, long double w) -> void {
      if (idx == active.size()) {
        sum += w * transformed(m, off, h);
        return;
      }
      auto [slot, order] = active[idx];
      const auto& ws = stencils.get(order);
      int p = central_half_width(order);
      for (int i = -p; i <= p; ++i) {
        long double wi = ws[i + p];
        if (wi == 0) continue;
        off[slot] = i;
        self(self, idx + 1, w * wi);
      }
      off[slot] = 0;
    };
    rec(rec, 0, 1.0L);
    lhs += t.coeff * static_cast<double>(sum / std::pow(static_cast<long double>(h), m));
  }
  return {std::abs(lhs - rhs), scale};
}

}  // namespace

double covariance_residual(const OperatorExpr& op, const Scalar& lambda, const Scalar& mu, unsigned k,
                           const GroupElement& g, const TestFunction& f, const std::vector<Point>& points) {
  if (f.nvec() != 2) throw std::invalid_argument("covariance needs a test function on E x E");
  NumericBidiff D = numeric_bidiff(op, f.dim(), lambda, mu);
  std::vector<TestFunction> derivs;
  for (const auto& t : D.terms) derivs.push_back(differentiate(f, t));
  double l = lambda.get_d(), m = mu.get_d();
  double nu = l + m + 0.5 * f.dim() + 2.0 * k;
  GroupElement ginv = g.inverse();
  StencilCache stencils;
  double diff = 0, scale = 0;
  for (const auto& x : points) {
    Residual r = covariance_at(D, derivs, l, m, nu, ginv, f, x, stencils);
    diff = std::max(diff, r.diff);
    scale = std::max(scale, r.scale);
  }
  return scale > 0 ? diff / scale : diff;
}

double CovarianceSweep::max_residual() const {
  double m = 0;
  for (const auto& c : cells) m = std::max(m, c.max_residual);
  return m;
}

CovarianceSweep covariance_sweep(const std::string& name, const OperatorExpr& op, unsigned k,
                                 const std::vector<std::pair<Scalar, Scalar>>& pairs,
                                 const std::vector<GroupClass>& classes, std::size_t points, std::uint64_t seed,
                                 int dim) {
  SymbolPoly sym = symbol(op, dim);
  CovarianceSweep sweep;
  StencilCache stencils;
  for (std::size_t ci = 0; ci < classes.size(); ++ci)
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto& [lambda, mu] = pairs[pi];
      std::seed_seq ss{seed, static_cast<std::uint64_t>(classes[ci]), static_cast<std::uint64_t>(pi)};
      std::mt19937_64 rng(ss);
      NumericBidiff D = expand(sym, {{Param::Lambda, lambda}, {Param::Mu, mu}, {Param::Dim, dim}});
      double l = lambda.get_d(), m = mu.get_d(), nu = l + m + 0.5 * dim + 2.0 * k;
      CovarianceCell cell{name, classes[ci], lambda, mu};
      std::normal_distribution<double> jitter(0.0, 0.3);
      std::size_t tries = 0;
      while (cell.points < points) {
        if (++tries > kMaxTries * points) throw std::runtime_error("covariance sweep: too many rejected samples");
        GroupElement g = random_element(rng, dim, classes[ci]);
        TestFunction f = TestFunction::random(rng, dim, 2, 2, 0.6);
        Point u = 0.5 * (f.center(0) + f.center(1));
        for (int j = 0; j < dim; ++j) u(j) += jitter(rng);
        Point x;
        try {
          x = g.act(u);
        } catch (const SingularPoint&) {
          ++cell.rejected;
          continue;
        }
        std::vector<TestFunction> derivs;
        for (const auto& t : D.terms) derivs.push_back(differentiate(f, t));
        try {
          Residual r = covariance_at(D, derivs, l, m, nu, g.inverse(), f, x, stencils);
          cell.max_residual = std::max(cell.max_residual, r.scale > 0 ? r.diff / r.scale : r.diff);
          ++cell.points;
        } catch (const SingularPoint&) {
          ++cell.rejected;
        } catch (const StencilTooWide&) {
          ++cell.rejected;
        }
      }
      sweep.cells.push_back(cell);
    }
  return sweep;
}

std::vector<std::pair<Scalar, Scalar>> default_parameter_pairs() {
  return {{Scalar(1, 3), Scalar(1, 5)}, {Scalar(-1, 4), Scalar(2, 7)}, {Scalar(3, 4), Scalar(-2, 5)}};
}

std::vector<GroupClass> default_group_classes() {
  return {GroupClass::Translate, GroupClass::Rotate, GroupClass::Dilate, GroupClass::InvertComposed};
}

ConventionVerdict adjudicate_convention(std::size_t points, std::uint64_t seed, double tolerance) {
  ConventionVerdict v;
  v.tolerance = tolerance;
  for (RConvention c : {RConvention::Formula, RConvention::Display}) {
    CovarianceSweep s = covariance_sweep("D1-" + to_string(c), build_OR_Dk(1, c), 1, default_parameter_pairs(),
                                         default_group_classes(), points, seed);
    v.max_residual[c] = s.max_residual();
    if (s.max_residual() <= tolerance) v.passing.push_back(c);
  }
  return v;
}

}  // namespace confcov
