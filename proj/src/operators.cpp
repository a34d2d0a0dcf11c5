#include "confcov/operators.hpp"

#include <chrono>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "confcov/coordinate_oracle.hpp"

namespace confcov {

namespace {

ParamPoly num(long n) { return ParamPoly::constant(n); }
ParamPoly half(const ParamPoly& p) { return p.scaled(Scalar(1, 2)); }

Word w(std::initializer_list<GenKind> kinds) {
  Word out;
  for (auto k : kinds) out.push_back(Generator{k, 0});
  return out;
}

Word power_word(GenKind k, unsigned n) { return Word(n, Generator{k, 0}); }

long factorial(unsigned n) {
  long f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

long binomial(unsigned n, unsigned k) {
  long b = 1;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Formula branch, valid for r <= t.
ParamRat c_rst_direct(unsigned r, unsigned s, unsigned t) {
  const ParamPoly lam = param(Param::Lambda), mu = param(Param::Mu), rh = rho();
  ParamRat sum;
  for (unsigned p = 0; p <= r; ++p) {
    Scalar w(factorial(r) * factorial(t), factorial(p));
    w.canonicalize();
    ParamPoly numer = pochhammer(lam + rh + num(static_cast<long>(r) - s + p), t - p) *
                      pochhammer(mu + rh + num(s + 2L * t), r - p);
    sum += ParamRat(numer.scaled(w), pochhammer(mu + num(1), t - p));
  }
  long sign = (t - r) % 2 ? -1 : 1;
  Scalar pre = Scalar(sign * binomial(r + s + t, t)) * pochhammer(num(s + 1), r).constant_term() /
               Scalar((1L << r) * factorial(r));
  return sum * ParamRat(ParamPoly(pre), pochhammer(lam + num(1), r));
}

HighFloat pi_hf() { return boost::math::constants::pi<HighFloat>(); }

bool is_nonpositive_integer(const HighFloat& x) { return x <= 0 && x == floor(x); }

}  // namespace

BetaTriple symbolic_beta() { return {param(Param::Beta1), param(Param::Beta2), param(Param::Beta3)}; }

OperatorExpr build_B(const BetaTriple& beta) {
  const ParamPoly& b1 = beta.first;
  const ParamPoly& b2 = beta.second;
  const ParamPoly& b3 = beta.third;
  const ParamPoly d = param(Param::Dim);
  ParamPoly a13 = b3 + b1 + d, a12 = b2 + b1 + d;
  OperatorExpr op;
  op.add_word(w({GenKind::MulR, GenKind::LapY, GenKind::LapZ}), ParamRat(1L));
  // sum (z_j - y_j) d/dy_j = -EulYZ and sum (y_j - z_j) d/dz_j = -EulZY
  op.add_word(w({GenKind::EulYZ, GenKind::LapZ}), num(-2) * a13);
  op.add_word(w({GenKind::EulZY, GenKind::LapY}), num(-2) * a12);
  op.add_word(w({GenKind::LapZ}), a13 * (b3 + b1 + num(2)));
  op.add_word(w({GenKind::LapY}), a12 * (b2 + b1 + num(2)));
  op.add_word(w({GenKind::MixedR}), num(-2) * a13 * a12);
  return op;
}

ParamPoly b_poly(const BetaTriple& beta) {
  const ParamPoly d = param(Param::Dim);
  ParamPoly sum = beta.first + beta.second + beta.third;
  return (beta.first + d) * (beta.first + num(2)) * (sum + num(2) * d) * (sum + d + num(2));
}

OperatorExpr build_E(const ParamPoly& lam, const ParamPoly& mu) {
  const ParamPoly d = param(Param::Dim);
  OperatorExpr op;
  op.add_word(w({GenKind::MulR, GenKind::LapY, GenKind::LapZ}), ParamRat(1L));
  op.add_word(w({GenKind::EulZY, GenKind::LapY}), num(-4) * mu);
  op.add_word(w({GenKind::EulYZ, GenKind::LapZ}), num(-4) * lam);
  op.add_word(w({GenKind::LapY}), num(2) * mu * (num(2) * mu + num(2) - d));
  op.add_word(w({GenKind::LapZ}), num(2) * lam * (num(2) * lam + num(2) - d));
  op.add_word(w({GenKind::MixedR}), num(-8) * lam * mu);
  return op;
}

OperatorExpr build_F(const ParamPoly& lam, const ParamPoly& mu) {
  const ParamPoly rh = rho();
  ParamPoly l1 = lam + num(1), m1 = mu + num(1);
  OperatorExpr op;
  op.add_word(w({GenKind::MulR, GenKind::LapY, GenKind::LapZ}), ParamRat(1L));
  op.add_word(w({GenKind::EulZY, GenKind::LapY}), num(4) * m1);
  op.add_word(w({GenKind::EulYZ, GenKind::LapZ}), num(4) * l1);
  op.add_word(w({GenKind::LapY}), num(4) * m1 * (mu + rh));
  op.add_word(w({GenKind::LapZ}), num(4) * l1 * (lam + rh));
  op.add_word(w({GenKind::MixedR}), num(-8) * l1 * m1);
  return op;
}

OperatorExpr build_C(const BetaTriple& beta) {
  const ParamPoly& b1 = beta.first;
  const ParamPoly& b2 = beta.second;
  const ParamPoly& b3 = beta.third;
  const ParamPoly d = param(Param::Dim);
  ParamPoly p12 = b1 + b2 + d + num(2), p13 = b1 + b3 + d + num(2);
  OperatorExpr op;
  op.add_word(w({GenKind::MulR, GenKind::LapY, GenKind::LapZ}), ParamRat(1L));
  op.add_word(w({GenKind::EulZY, GenKind::LapY}), num(2) * p12);
  op.add_word(w({GenKind::EulYZ, GenKind::LapZ}), num(2) * p13);
  op.add_word(w({GenKind::LapY}), (b1 + b2 + num(2) * d) * p12);
  op.add_word(w({GenKind::MixedR}), num(-2) * p12 * p13);
  op.add_word(w({GenKind::LapZ}), (b1 + b3 + num(2) * d) * p13);
  return op;
}

BernsteinSatoReport verify_bernstein_sato(const Scalar& perturbation) {
  auto start = std::chrono::steady_clock::now();
  InvariantKernel shifted = InvariantKernel::monomial(Offset{0, 0, 1});
  InvariantKernel lhs = apply_word(build_B(), shifted);
  InvariantKernel rhs = InvariantKernel::monomial(Offset{0, 0, 0}, b_poly() + ParamPoly(perturbation));
  BernsteinSatoReport report;
  report.lhs_terms = lhs.terms().size();
  report.residual = lhs - rhs;
  report.passed = report.residual.is_zero();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!report.passed) throw IdentityFailed(report.residual);
  return report;
}

bool verify_bernstein_sato_coordinates(int dim, const Scalar& beta1, const Scalar& beta2, const Scalar& beta3) {
  Bindings b{{Param::Beta1, beta1}, {Param::Beta2, beta2}, {Param::Beta3, beta3}};
  CoordExpr shifted = embed(InvariantKernel::monomial(Offset{0, 0, 1}), dim, b);
  CoordExpr lhs = apply_word_coord(build_B(), shifted, b);
  CoordExpr rhs = embed(InvariantKernel::monomial(Offset{0, 0, 0}, b_poly()), dim, b);
  return equivalent(lhs, rhs);
}

ParamRat c_rst(unsigned r, unsigned s, unsigned t) {
  if (r <= t) return c_rst_direct(r, s, t);
  PolyBindings swap{{Param::Lambda, param(Param::Mu)}, {Param::Mu, param(Param::Lambda)}};
  return c_rst_direct(t, s, r).substitute(swap);
}

std::string to_string(RConvention c) { return c == RConvention::Formula ? "formula" : "display"; }

OperatorExpr build_OR_Dk(unsigned k, RConvention convention) {
  OperatorExpr op;
  for (unsigned r = 0; r <= k; ++r)
    for (unsigned s = 0; r + s <= k; ++s) {
      unsigned t = k - r - s;
      Word word = power_word(GenKind::LapY, r);
      Word ws = power_word(GenKind::MixedR, s), wt = power_word(GenKind::LapZ, t);
      word.insert(word.end(), ws.begin(), ws.end());
      word.insert(word.end(), wt.begin(), wt.end());
      ParamRat c = c_rst(r, s, t);
      if (convention == RConvention::Display) c *= ParamRat(static_cast<long>(1L << s));
      op.add_word(std::move(word), c);
    }
  return op.restricted_to_diagonal();
}

OperatorExpr build_F_k(unsigned k) {
  OperatorExpr op = OperatorExpr::identity();
  for (unsigned i = 0; i < k; ++i)
    op = build_F(param(Param::Lambda) + num(i), param(Param::Mu) + num(i)) * op;
  return op.restricted_to_diagonal();
}

OperatorExpr build_C_k(unsigned k, const BetaTriple& beta) {
  OperatorExpr op = OperatorExpr::identity();
  for (unsigned i = 1; i <= k; ++i)
    op = op * build_C(BetaTriple{beta.first - num(2L * i), beta.second, beta.third});
  return op;
}

LambdaTriple beta_to_lambda(const BetaTriple& b) {
  const ParamPoly rh = rho();
  return {half(b.second + b.third) + rh, half(b.first + b.third) + rh, half(b.first + b.second) + rh};
}

BetaTriple lambda_to_beta(const LambdaTriple& l) {
  const ParamPoly rh = rho();
  return {-l.first + l.second + l.third - rh, l.first - l.second + l.third - rh, l.first + l.second - l.third - rh};
}

PolyBindings lambda_mu_from_beta(const BetaTriple& beta) {
  LambdaTriple l = beta_to_lambda(beta);
  return {{Param::Lambda, l.second}, {Param::Mu, l.third}};
}

ParamRat c_k_over_c0(unsigned k, const ParamPoly& beta10) {
  const ParamPoly rh = rho();
  ParamPoly h = -half(beta10);
  ParamPoly den = pochhammer(rh, k) * pochhammer(h, k) * pochhammer(h - rh + num(1), k);
  long scale = factorial(k);
  for (unsigned i = 0; i < k; ++i) scale *= 16;
  return ParamRat(num(1), den.scaled(Scalar(scale)));
}

bool recursion_consistency(unsigned k) {
  const ParamPoly b10 = param(Param::Beta1), d = param(Param::Dim);
  ParamRat step = c_k_over_c0(k + 1, b10) / c_k_over_c0(k, b10);
  ParamPoly b1 = b10 - num(2L * k + 2);
  ParamRat factor(num(1), num(2L * k + 2) * (num(2L * k) + d) * (b1 + num(2)) * (b1 + d));
  return step == factor;
}

SymbolComparison compare_symbols(unsigned k, int dim, RConvention convention) {
  SymbolComparison out;
  out.symbol_F = symbol(build_F_k(k), dim);
  out.symbol_D = symbol(build_OR_Dk(k, convention), dim);
  out.ratio = is_proportional(out.symbol_F, out.symbol_D);
  if (out.ratio) {
    out.ratio_depends_only_on_lambda_mu = !out.ratio->is_zero();
    for (Param p : {Param::Beta1, Param::Beta2, Param::Beta3, Param::Dim})
      if (!is_free_of(*out.ratio, p)) out.ratio_depends_only_on_lambda_mu = false;
  }
  return out;
}

HighFloat to_high(const Scalar& q) {
  return HighFloat(q.get_num().get_str()) / HighFloat(q.get_den().get_str());
}

HighFloat gamma_checked(const HighFloat& x, const std::string& label) {
  if (is_nonpositive_integer(x)) throw PoleAtParameter(label + " at " + x.str(10));
  return boost::math::tgamma(x);
}

HighFloat knapp_stein_multiplier(const HighFloat& nu, int dim) {
  HighFloat top = gamma_checked(nu / 2, "Gamma(nu/2)");
  HighFloat bottom_arg = (HighFloat(dim) - nu) / 2;
  if (is_nonpositive_integer(bottom_arg)) return HighFloat(0);
  return pow(HighFloat(2), nu) * pow(pi_hf(), HighFloat(dim) / 2) * top / boost::math::tgamma(bottom_arg);
}

HighFloat n_constant(const HighFloat& lam, const HighFloat& mu, int dim) {
  HighFloat rh = HighFloat(dim) / 2;
  HighFloat top = gamma_checked(lam, "Gamma(lambda)") * gamma_checked(-lam - 1, "Gamma(-lambda-1)") *
                  gamma_checked(mu, "Gamma(mu)") * gamma_checked(-mu - 1, "Gamma(-mu-1)");
  HighFloat bottom = 1;
  for (const HighFloat& a : {rh - lam, rh + lam + 1, rh - mu, rh + mu + 1}) {
    if (is_nonpositive_integer(a)) return HighFloat(0);
    bottom *= boost::math::tgamma(a);
  }
  return pow(pi_hf(), 2 * dim) / 16 * top / bottom;
}

}  // namespace confcov
