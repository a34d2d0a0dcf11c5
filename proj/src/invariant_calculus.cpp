#include "confcov/invariant_calculus.hpp"

#include <stdexcept>

namespace confcov {

namespace {

ParamPoly half(Param p) { return param(p).scaled(Scalar(1, 2)); }
ParamPoly num(long n) { return ParamPoly::constant(n); }

InvariantKernel mul(Invariant v, const InvariantKernel& k) { return mul_invariant(v, k); }
InvariantKernel d(Invariant v, const InvariantKernel& k) { return partial(v, k); }

constexpr Invariant S = Invariant::S, T = Invariant::T, R = Invariant::R;

}  // namespace

InvariantKernel InvariantKernel::monomial(Offset o, const ParamPoly& c) {
  InvariantKernel k;
  k.add_term(o, c);
  return k;
}

void InvariantKernel::add_term(Offset o, const ParamPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(o, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

InvariantKernel& InvariantKernel::operator+=(const InvariantKernel& o) {
  for (const auto& [off, c] : o.terms_) add_term(off, c);
  return *this;
}

InvariantKernel& InvariantKernel::operator-=(const InvariantKernel& o) {
  for (const auto& [off, c] : o.terms_) add_term(off, -c);
  return *this;
}

InvariantKernel InvariantKernel::scaled(const ParamPoly& c) const {
  InvariantKernel r;
  for (const auto& [off, v] : terms_) r.add_term(off, v * c);
  return r;
}

InvariantKernel InvariantKernel::substitute(const Bindings& b) const {
  InvariantKernel r;
  for (const auto& [off, v] : terms_) r.add_term(off, confcov::substitute(v, b));
  return r;
}

InvariantKernel InvariantKernel::substitute(const PolyBindings& b) const {
  InvariantKernel r;
  for (const auto& [off, v] : terms_) r.add_term(off, confcov::substitute(v, b));
  return r;
}

std::string InvariantKernel::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [o, c] : terms_) {
    if (!s.empty()) s += "\n";
    s += "(" + std::to_string(o.i) + "," + std::to_string(o.j) + "," + std::to_string(o.k) + "): " + c.to_string();
  }
  return s;
}

InvariantKernel partial(Invariant v, const InvariantKernel& k) {
  InvariantKernel r;
  for (const auto& [o, c] : k.terms()) {
    Offset o2 = o;
    ParamPoly exponent;
    switch (v) {
      case Invariant::S:
        exponent = half(Param::Beta3) + num(o.i);
        --o2.i;
        break;
      case Invariant::T:
        exponent = half(Param::Beta2) + num(o.j);
        --o2.j;
        break;
      case Invariant::R:
        exponent = half(Param::Beta1) + num(o.k);
        --o2.k;
        break;
    }
    r.add_term(o2, c * exponent);
  }
  return r;
}

InvariantKernel mul_invariant(Invariant v, const InvariantKernel& k) {
  InvariantKernel r;
  for (const auto& [o, c] : k.terms()) {
    Offset o2 = o;
    switch (v) {
      case Invariant::S: ++o2.i; break;
      case Invariant::T: ++o2.j; break;
      case Invariant::R: ++o2.k; break;
    }
    r.add_term(o2, c);
  }
  return r;
}

// Delta_y F = 2d(F_s + F_r) + 4s F_ss + 4(s - t + r) F_sr + 4r F_rr
InvariantKernel lap_y(const InvariantKernel& k) {
  ParamPoly dim = param(Param::Dim);
  InvariantKernel fs = d(S, k), fr = d(R, k);
  InvariantKernel fsr = d(R, fs);
  InvariantKernel out = (fs + fr).scaled(num(2) * dim);
  out += mul(S, d(S, fs)).scaled(num(4));
  out += (mul(S, fsr) - mul(T, fsr) + mul(R, fsr)).scaled(num(4));
  out += mul(R, d(R, fr)).scaled(num(4));
  return out;
}

// Delta_z F = 2d(F_t + F_r) + 4t F_tt + 4(t - s + r) F_tr + 4r F_rr
InvariantKernel lap_z(const InvariantKernel& k) {
  ParamPoly dim = param(Param::Dim);
  InvariantKernel ft = d(T, k), fr = d(R, k);
  InvariantKernel ftr = d(R, ft);
  InvariantKernel out = (ft + fr).scaled(num(2) * dim);
  out += mul(T, d(T, ft)).scaled(num(4));
  out += (mul(T, ftr) - mul(S, ftr) + mul(R, ftr)).scaled(num(4));
  out += mul(R, d(R, fr)).scaled(num(4));
  return out;
}

// R F = -2d F_r + 2(s + t - r) F_st + 2(s - t - r) F_tr + 2(t - s - r) F_sr - 4r F_rr
InvariantKernel mixed_R(const InvariantKernel& k) {
  ParamPoly dim = param(Param::Dim);
  InvariantKernel fs = d(S, k), ft = d(T, k), fr = d(R, k);
  InvariantKernel fst = d(T, fs), ftr = d(R, ft), fsr = d(R, fs);
  InvariantKernel out = fr.scaled(num(-2) * dim);
  out += (mul(S, fst) + mul(T, fst) - mul(R, fst)).scaled(num(2));
  out += (mul(S, ftr) - mul(T, ftr) - mul(R, ftr)).scaled(num(2));
  out += (mul(T, fsr) - mul(S, fsr) - mul(R, fsr)).scaled(num(2));
  out -= mul(R, d(R, fr)).scaled(num(4));
  return out;
}

// sum (y_j - z_j) d/dy_j F = (s - t + r) F_s + 2r F_r
InvariantKernel euler_yz(const InvariantKernel& k) {
  InvariantKernel fs = d(S, k);
  return mul(S, fs) - mul(T, fs) + mul(R, fs) + mul(R, d(R, k)).scaled(num(2));
}

// sum (z_j - y_j) d/dz_j F = (t - s + r) F_t + 2r F_r
InvariantKernel euler_zy(const InvariantKernel& k) {
  InvariantKernel ft = d(T, k);
  return mul(T, ft) - mul(S, ft) + mul(R, ft) + mul(R, d(R, k)).scaled(num(2));
}

InvariantKernel apply_generator(const Generator& g, const InvariantKernel& k) {
  switch (g.kind) {
    case GenKind::Identity: return k;
    case GenKind::MulR: return mul(R, k);
    case GenKind::LapY: return lap_y(k);
    case GenKind::LapZ: return lap_z(k);
    case GenKind::MixedR: return mixed_R(k);
    case GenKind::EulYZ: return euler_yz(k);
    case GenKind::EulZY: return euler_zy(k);
    default: throw UnsupportedGenerator(g.name());
  }
}

InvariantKernel apply_word(const OperatorExpr& op, const InvariantKernel& k) {
  InvariantKernel out;
  for (const auto& [w, c] : op.words()) {
    if (!c.is_polynomial()) throw std::invalid_argument("apply_word needs polynomial coefficients");
    for (const auto& g : w)
      if (!g.invariant()) throw UnsupportedGenerator(g.name());
    InvariantKernel cur = k;
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = apply_generator(*it, cur);
    out += cur.scaled(c.num());
  }
  return out;
}

InvariantKernel swap_yz(const InvariantKernel& k) {
  PolyBindings swap{{Param::Beta2, param(Param::Beta3)}, {Param::Beta3, param(Param::Beta2)}};
  InvariantKernel r;
  for (const auto& [o, c] : k.terms()) r.add_term(Offset{o.j, o.i, o.k}, substitute(c, swap));
  return r;
}

}  // namespace confcov
