#include "confcov/coordinate_oracle.hpp"

#include "confcov/detail/invariant_basis.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace confcov {

namespace {

ParamPoly num(long n) { return ParamPoly::constant(n); }

CoordPoly cvar(std::size_t v) { return CoordPoly::variable(v); }

std::array<ParamPoly, 3> symbolic_base() {
  return {param(Param::Beta3), param(Param::Beta2), param(Param::Beta1)};
}

CoordPoly power(const CoordPoly& p, int k) {
  CoordPoly r = CoordPoly::constant(1);
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

Bindings with_dim(const Bindings& extra, int dim) {
  Bindings b = extra;
  b[Param::Dim] = dim;
  return b;
}

CoordPoly bind_coefficients(const CoordPoly& p, const Bindings& b) {
  return p.map_coefficients([&](const ParamPoly& c) { return substitute(c, b); });
}

void for_each_submultiindex(const CoordOperator::DerivIndex& alpha,
                            const std::function<void(const CoordOperator::DerivIndex&, long)>& fn) {
  CoordOperator::DerivIndex gamma;
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long binom) {
    if (i == kCoordVars) {
      fn(gamma, binom);
      return;
    }
    long c = 1;
    for (unsigned g = 0; g <= alpha.e[i]; ++g) {
      gamma.e[i] = static_cast<std::uint16_t>(g);
      rec(i + 1, binom * c);
      c = c * (alpha.e[i] - g) / (g + 1);
    }
    gamma.e[i] = 0;
  };
  rec(0, 1);
}

CoordPoly derive(const CoordPoly& p, const CoordOperator::DerivIndex& gamma) {
  CoordPoly r = p;
  for (std::size_t v = 0; v < kCoordVars; ++v)
    for (unsigned k = 0; k < gamma.e[v] && !r.is_zero(); ++k) r = r.derivative(v);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- CoordExpr

CoordExpr::CoordExpr(int dim) : CoordExpr(dim, symbolic_base()) {}

CoordExpr::CoordExpr(int dim, std::array<ParamPoly, 3> base) : dim_(dim), base_(std::move(base)) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
}

void CoordExpr::add_term(Offset o, const CoordPoly& p) {
  if (p.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(o, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void CoordExpr::check_compatible(const CoordExpr& o) const {
  if (dim_ != o.dim_ || base_ != o.base_) throw std::invalid_argument("incompatible coordinate expressions");
}

CoordExpr& CoordExpr::operator+=(const CoordExpr& o) {
  check_compatible(o);
  for (const auto& [off, p] : o.terms_) add_term(off, p);
  return *this;
}

CoordExpr& CoordExpr::operator-=(const CoordExpr& o) {
  check_compatible(o);
  for (const auto& [off, p] : o.terms_) add_term(off, -p);
  return *this;
}

CoordExpr CoordExpr::scaled(const ParamPoly& c) const {
  CoordExpr r(dim_, base_);
  for (const auto& [off, p] : terms_) r.add_term(off, p.scaled(c));
  return r;
}

CoordExpr CoordExpr::times(const CoordPoly& q) const {
  CoordExpr r(dim_, base_);
  for (const auto& [off, p] : terms_) r.add_term(off, p * q);
  return r;
}

std::string CoordExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [o, p] : terms_) {
    if (!s.empty()) s += "\n";
    s += "[" + std::to_string(o.i) + "," + std::to_string(o.j) + "," + std::to_string(o.k) + "] " + p.to_string();
  }
  return s;
}

CoordPoly coord_s(int dim) {
  CoordPoly p;
  for (int j = 0; j < dim; ++j) p += CoordPoly::variable(y_var(j), 2);
  return p;
}

CoordPoly coord_t(int dim) {
  CoordPoly p;
  for (int j = 0; j < dim; ++j) p += CoordPoly::variable(z_var(j), 2);
  return p;
}

CoordPoly coord_r(int dim) {
  CoordPoly p;
  for (int j = 0; j < dim; ++j) {
    CoordPoly diff = cvar(y_var(j)) - cvar(z_var(j));
    p += diff * diff;
  }
  return p;
}

CoordExpr partial_coord(Axis axis, const CoordExpr& x) {
  if (axis.j < 0 || axis.j >= x.dim()) throw std::invalid_argument("axis out of range");
  const auto& base = x.base();
  std::size_t v = axis.z ? z_var(axis.j) : y_var(axis.j);
  CoordPoly yz = cvar(y_var(axis.j)) - cvar(z_var(axis.j));
  CoordExpr out(x.dim(), base);
  for (const auto& [o, p] : x.terms()) {
    out.add_term(o, p.derivative(v));
    if (!axis.z) {
      ParamPoly e0 = base[0] + num(2L * o.i);
      out.add_term(Offset{o.i - 1, o.j, o.k}, (p * cvar(v)).scaled(e0));
    } else {
      ParamPoly e1 = base[1] + num(2L * o.j);
      out.add_term(Offset{o.i, o.j - 1, o.k}, (p * cvar(v)).scaled(e1));
    }
    ParamPoly e2 = base[2] + num(2L * o.k);
    if (axis.z) e2 = -e2;
    out.add_term(Offset{o.i, o.j, o.k - 1}, (p * yz).scaled(e2));
  }
  return out;
}

CoordExpr embed(const InvariantKernel& k, int dim, const Bindings& beta) {
  Bindings b = with_dim(beta, dim);
  std::array<ParamPoly, 3> base = symbolic_base();
  for (auto& e : base) e = substitute(e, b);
  CoordExpr out(dim, base);
  CoordPoly s = coord_s(dim), t = coord_t(dim), r = coord_r(dim);
  for (const auto& [o, c] : k.terms()) {
    CoordPoly p(substitute(c, b));
    Offset rad = o;
    if (rad.i > 0) {
      p *= power(s, rad.i);
      rad.i = 0;
    }
    if (rad.j > 0) {
      p *= power(t, rad.j);
      rad.j = 0;
    }
    if (rad.k > 0) {
      p *= power(r, rad.k);
      rad.k = 0;
    }
    out.add_term(rad, p);
  }
  return out;
}

namespace {

bool flattened_zero(const CoordExpr& diff) {
  Offset lo = diff.terms().begin()->first;
  for (const auto& [o, p] : diff.terms()) {
    lo.i = std::min(lo.i, o.i);
    lo.j = std::min(lo.j, o.j);
    lo.k = std::min(lo.k, o.k);
  }
  int dim = diff.dim();
  CoordPoly s = coord_s(dim), t = coord_t(dim), r = coord_r(dim);
  CoordPoly flat;
  for (const auto& [o, p] : diff.terms())
    flat += p * power(s, o.i - lo.i) * power(t, o.j - lo.j) * power(r, o.k - lo.k);
  return flat.is_zero();
}

// Normal form in s, t, r: each coefficient is written in s, t, <y,z>, then
// <y,z> = (s + t - r)/2.
std::map<Offset, ParamPoly> invariant_normal_form(const CoordExpr& e) {
  std::map<Offset, ParamPoly> out;
  for (const auto& [o, p] : e.terms()) {
    for (const auto& [ex, c] : detail::solve_invariant_basis(p, e.dim(), y_var(0), z_var(0))) {
      const int b = static_cast<int>(ex[1]);
      Scalar scale = Scalar(1, 1) / Scalar(mpz_class(1) << b);
      for (int i = 0; i <= b; ++i)
        for (int j = 0; i + j <= b; ++j) {
          int k = b - i - j;
          mpz_class m;
          mpz_bin_uiui(m.get_mpz_t(), b, i);
          mpz_class m2;
          mpz_bin_uiui(m2.get_mpz_t(), b - i, j);
          Scalar f = scale * Scalar(m * m2) * (k % 2 ? -1 : 1);
          Offset target{o.i + static_cast<int>(ex[0]) + i, o.j + static_cast<int>(ex[2]) + j, o.k + k};
          out[target] += c.scaled(f);
        }
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

}  // namespace

bool equivalent(const CoordExpr& a, const CoordExpr& b) {
  CoordExpr diff = a - b;
  if (diff.is_zero()) return true;
  if (diff.dim() >= 2) {
    try {
      return invariant_normal_form(diff).empty();
    } catch (const NotInvariant&) {
    }
  }
  return flattened_zero(diff);
}

CoordExpr apply_generator_coord(const Generator& g, const CoordExpr& x) {
  int dim = x.dim();
  CoordExpr out(dim, x.base());
  auto py = [&](int j, const CoordExpr& e) { return partial_coord(Axis{false, j}, e); };
  auto pz = [&](int j, const CoordExpr& e) { return partial_coord(Axis{true, j}, e); };
  switch (g.kind) {
    case GenKind::Identity:
      return x;
    case GenKind::MulR:
      for (const auto& [o, p] : x.terms()) out.add_term(Offset{o.i, o.j, o.k + 1}, p);
      return out;
    case GenKind::LapY:
      for (int j = 0; j < dim; ++j) out += py(j, py(j, x));
      return out;
    case GenKind::LapZ:
      for (int j = 0; j < dim; ++j) out += pz(j, pz(j, x));
      return out;
    case GenKind::MixedR:
      for (int j = 0; j < dim; ++j) out += py(j, pz(j, x));
      return out;
    case GenKind::EulYZ:
      for (int j = 0; j < dim; ++j) out += py(j, x).times(cvar(y_var(j)) - cvar(z_var(j)));
      return out;
    case GenKind::EulZY:
      for (int j = 0; j < dim; ++j) out += pz(j, x).times(cvar(z_var(j)) - cvar(y_var(j)));
      return out;
    case GenKind::PartialY:
      return py(g.axis, x);
    case GenKind::PartialZ:
      return pz(g.axis, x);
    case GenKind::MulY:
      return x.times(cvar(y_var(g.axis)));
    case GenKind::MulZ:
      return x.times(cvar(z_var(g.axis)));
  }
  throw std::logic_error("unknown generator");
}

CoordExpr apply_word_coord(const OperatorExpr& op, const CoordExpr& x, const Bindings& extra) {
  Bindings b = with_dim(extra, x.dim());
  CoordExpr out(x.dim(), x.base());
  for (const auto& [w, c] : op.words()) {
    if (!c.is_polynomial()) throw std::invalid_argument("coordinate application needs polynomial coefficients");
    CoordExpr cur = x;
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = apply_generator_coord(*it, cur);
    out += cur.scaled(substitute(c.num(), b));
  }
  return out;
}

// ------------------------------------------------------------ CoordOperator

CoordOperator CoordOperator::identity(int dim) { return multiplication(dim, CoordPoly::constant(1)); }

CoordOperator CoordOperator::multiplication(int dim, const CoordPoly& p) {
  CoordOperator op(dim);
  op.add_term(DerivIndex{}, p);
  return op;
}

CoordOperator CoordOperator::derivative(int dim, const DerivIndex& alpha) {
  CoordOperator op(dim);
  op.add_term(alpha, CoordPoly::constant(1));
  return op;
}

void CoordOperator::add_term(const DerivIndex& alpha, const CoordPoly& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(alpha, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

CoordOperator& CoordOperator::operator+=(const CoordOperator& o) {
  for (const auto& [al, a] : o.terms_) add_term(al, a);
  return *this;
}

CoordOperator& CoordOperator::operator-=(const CoordOperator& o) {
  for (const auto& [al, a] : o.terms_) add_term(al, -a);
  return *this;
}

CoordOperator CoordOperator::scaled(const ParamPoly& c) const {
  CoordOperator r(dim_);
  for (const auto& [al, a] : terms_) r.add_term(al, a.scaled(c));
  return r;
}

CoordOperator operator*(const CoordOperator& a, const CoordOperator& b) {
  CoordOperator r(a.dim_);
  for (const auto& [alpha, ca] : a.terms_)
    for (const auto& [beta, cb] : b.terms_)
      for_each_submultiindex(alpha, [&](const CoordOperator::DerivIndex& gamma, long binom) {
        CoordPoly db = derive(cb, gamma);
        if (db.is_zero()) return;
        r.add_term((alpha / gamma) * beta, (ca * db).scaled(num(binom)));
      });
  return r;
}

CoordOperator CoordOperator::substitute(const Bindings& b) const {
  CoordOperator r(dim_);
  for (const auto& [al, a] : terms_) r.add_term(al, bind_coefficients(a, b));
  return r;
}

std::string CoordOperator::to_string() const {
  if (terms_.empty()) return "0";
  auto names = DefaultNames<ParamPoly, kCoordVars>::get();
  std::string s;
  for (const auto& [al, a] : terms_) {
    if (!s.empty()) s += "\n";
    std::string d;
    for (std::size_t v = 0; v < kCoordVars; ++v) {
      if (!al.e[v]) continue;
      if (!d.empty()) d += " ";
      d += "d" + names[v];
      if (al.e[v] > 1) d += "^" + std::to_string(al.e[v]);
    }
    s += "(" + a.to_string() + ")" + (d.empty() ? "" : " " + d);
  }
  return s;
}

CoordOperator generator_coord(const Generator& g, int dim) {
  using DI = CoordOperator::DerivIndex;
  CoordOperator op(dim);
  switch (g.kind) {
    case GenKind::Identity:
      return CoordOperator::identity(dim);
    case GenKind::MulR:
      return CoordOperator::multiplication(dim, coord_r(dim));
    case GenKind::LapY:
      for (int j = 0; j < dim; ++j) op.add_term(DI::unit(y_var(j), 2), CoordPoly::constant(1));
      return op;
    case GenKind::LapZ:
      for (int j = 0; j < dim; ++j) op.add_term(DI::unit(z_var(j), 2), CoordPoly::constant(1));
      return op;
    case GenKind::MixedR:
      for (int j = 0; j < dim; ++j) op.add_term(DI::unit(y_var(j)) * DI::unit(z_var(j)), CoordPoly::constant(1));
      return op;
    case GenKind::EulYZ:
      for (int j = 0; j < dim; ++j) op.add_term(DI::unit(y_var(j)), cvar(y_var(j)) - cvar(z_var(j)));
      return op;
    case GenKind::EulZY:
      for (int j = 0; j < dim; ++j) op.add_term(DI::unit(z_var(j)), cvar(z_var(j)) - cvar(y_var(j)));
      return op;
    case GenKind::PartialY:
      return CoordOperator::derivative(dim, DI::unit(y_var(g.axis)));
    case GenKind::PartialZ:
      return CoordOperator::derivative(dim, DI::unit(z_var(g.axis)));
    case GenKind::MulY:
      return CoordOperator::multiplication(dim, cvar(y_var(g.axis)));
    case GenKind::MulZ:
      return CoordOperator::multiplication(dim, cvar(z_var(g.axis)));
  }
  throw std::logic_error("unknown generator");
}

CoordOperator to_coord(const OperatorExpr& op, int dim, const Bindings& extra) {
  Bindings b = with_dim(extra, dim);
  CoordOperator out(dim);
  for (const auto& [w, c] : op.words()) {
    if (!c.is_polynomial()) throw std::invalid_argument("coordinate rendering needs polynomial coefficients");
    CoordOperator cur = CoordOperator::identity(dim);
    for (const auto& g : w) cur = cur * generator_coord(g, dim);
    out += cur.scaled(substitute(c.num(), b));
  }
  return out;
}

CoordOperator formal_adjoint(const CoordOperator& op) {
  CoordOperator r(op.dim());
  for (const auto& [alpha, a] : op.terms()) {
    long sign = (alpha.degree() % 2) ? -1 : 1;
    for_each_submultiindex(alpha, [&](const CoordOperator::DerivIndex& gamma, long binom) {
      CoordPoly da = derive(a, gamma);
      if (da.is_zero()) return;
      r.add_term(alpha / gamma, da.scaled(num(sign * binom)));
    });
  }
  return r;
}

CoordOperator formal_adjoint(const OperatorExpr& op, int dim, const Bindings& extra) {
  return formal_adjoint(to_coord(op, dim, extra));
}

CoordPoly apply(const CoordOperator& op, const CoordPoly& f) {
  CoordPoly out;
  for (const auto& [alpha, a] : op.terms()) out += a * derive(f, alpha);
  return out;
}

}  // namespace confcov
