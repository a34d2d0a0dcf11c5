#include "confcov/symbol.hpp"

#include "confcov/detail/invariant_basis.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace confcov {

namespace {

using Mono = ExpScalarPoly::Mono;

unsigned yz_degree(const Mono& m) {
  unsigned s = 0;
  for (std::size_t v = 0; v < 2 * kMaxDim; ++v) s += m.e[v];
  return s;
}

// D_v P = dP/dv + w P, with w the dual variable of v.
ExpScalarPoly dual_derivative(const ExpScalarPoly& p, std::size_t v, std::size_t w) {
  ExpScalarPoly out;
  for (const auto& [m, c] : p.terms()) {
    if (m.e[v]) {
      Mono m2 = m;
      --m2.e[v];
      out.add_term(m2, Scalar(c * m.e[v]));
    }
    Mono m3 = m;
    ++m3.e[w];
    out.add_term(m3, c);
  }
  return out;
}

ExpScalarPoly dy(const ExpScalarPoly& p, int j) { return dual_derivative(p, y_var(j), xi_var(j)); }
ExpScalarPoly dz(const ExpScalarPoly& p, int j) { return dual_derivative(p, z_var(j), eta_var(j)); }

ExpScalarPoly var(std::size_t v) { return ExpScalarPoly::variable(v); }

ExpScalarPoly apply_exp(const Generator& g, const ExpScalarPoly& p, int dim) {
  ExpScalarPoly out;
  switch (g.kind) {
    case GenKind::Identity:
      return p;
    case GenKind::MulR:
      for (int j = 0; j < dim; ++j) {
        ExpScalarPoly diff = var(y_var(j)) - var(z_var(j));
        out += p * diff * diff;
      }
      return out;
    case GenKind::LapY:
      for (int j = 0; j < dim; ++j) out += dy(dy(p, j), j);
      return out;
    case GenKind::LapZ:
      for (int j = 0; j < dim; ++j) out += dz(dz(p, j), j);
      return out;
    case GenKind::MixedR:
      for (int j = 0; j < dim; ++j) out += dy(dz(p, j), j);
      return out;
    case GenKind::EulYZ:
      for (int j = 0; j < dim; ++j) out += dy(p, j) * (var(y_var(j)) - var(z_var(j)));
      return out;
    case GenKind::EulZY:
      for (int j = 0; j < dim; ++j) out += dz(p, j) * (var(z_var(j)) - var(y_var(j)));
      return out;
    case GenKind::PartialY:
      return dy(p, g.axis);
    case GenKind::PartialZ:
      return dz(p, g.axis);
    case GenKind::MulY:
      return p * var(y_var(g.axis));
    case GenKind::MulZ:
      return p * var(z_var(g.axis));
  }
  throw std::logic_error("unknown generator");
}

// Largest possible drop in (y,z)-degree caused by one generator.
int max_degree_drop(const Generator& g) {
  switch (g.kind) {
    case GenKind::LapY:
    case GenKind::LapZ:
    case GenKind::MixedR:
      return 2;
    case GenKind::PartialY:
    case GenKind::PartialZ:
      return 1;
    case GenKind::MulR:
      return -2;
    case GenKind::MulY:
    case GenKind::MulZ:
      return -1;
    default:
      return 0;
  }
}

ExpScalarPoly truncate(const ExpScalarPoly& p, int budget) {
  ExpScalarPoly out;
  for (const auto& [m, c] : p.terms())
    if (static_cast<int>(yz_degree(m)) <= budget) out.add_term(m, c);
  return out;
}

template <class C>
Poly<C, kExpVars> at_origin(const Poly<C, kExpVars>& p) {
  Poly<C, kExpVars> out;
  for (const auto& [m, c] : p.terms())
    if (yz_degree(m) == 0) out.add_term(m, c);
  return out;
}

ParamRat to_rat(const Scalar& s) { return ParamRat(s); }
ParamRat to_rat(const ParamRat& r) { return r; }

// Rewrites a polynomial in (xi, eta) as a polynomial in A, B, C.
template <class C>
ABCPoly solve_abc(const Poly<C, kExpVars>& target, int dim) {
  ABCPoly out;
  for (const auto& [e, c] : detail::solve_invariant_basis(target, dim, xi_var(0), eta_var(0))) {
    ABCPoly::Mono m;
    m.e = {static_cast<std::uint16_t>(e[0]), static_cast<std::uint16_t>(e[1]), static_cast<std::uint16_t>(e[2])};
    out.add_term(m, to_rat(c));
  }
  return out;
}

struct TrieNode {
  std::map<Generator, std::unique_ptr<TrieNode>> children;
  int budget = 0;
  ParamRat terminal;  // summed coefficient of words ending here
};

void walk(const TrieNode& node, const ExpScalarPoly& p, int dim, ABCPoly& acc) {
  if (!node.terminal.is_zero()) {
    ExpScalarPoly origin = at_origin(p);
    if (!origin.is_zero()) acc += solve_abc(origin, dim).scaled(node.terminal);
  }
  for (const auto& [g, child] : node.children) {
    ExpScalarPoly next = truncate(apply_exp(g, p, dim), child->budget);
    if (next.is_zero()) continue;
    walk(*child, next, dim, acc);
  }
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
}

}  // namespace

SymbolPoly SymbolPoly::monomial(int dim, unsigned a, unsigned b, unsigned c, const ParamRat& coeff) {
  ABCPoly::Mono m;
  m.e = {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(c)};
  return SymbolPoly(dim, ABCPoly::term(m, coeff));
}

ParamRat SymbolPoly::coefficient(unsigned a, unsigned b, unsigned c) const {
  ABCPoly::Mono m;
  m.e = {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(c)};
  auto it = poly_.terms().find(m);
  return it == poly_.terms().end() ? ParamRat() : it->second;
}

ExpPolyExpr exp_apply(const OperatorExpr& op, int dim) {
  check_dim(dim);
  Bindings bind{{Param::Dim, dim}};
  ExpPolyExpr out{dim, {}};
  for (const auto& [w, c] : op.words()) {
    ExpScalarPoly p = ExpScalarPoly::constant(1);
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = apply_exp(*it, p, dim);
    ParamRat coeff = c.substitute(bind);
    for (const auto& [m, s] : p.terms()) out.poly.add_term(m, ParamRat(s) * coeff);
  }
  return out;
}

SymbolPoly restrict_symbol(const ExpPolyExpr& e) {
  return SymbolPoly(e.dim, solve_abc(at_origin(e.poly), e.dim));
}

SymbolPoly symbol(const OperatorExpr& op, int dim) {
  check_dim(dim);
  Bindings bind{{Param::Dim, dim}};
  TrieNode root;
  for (const auto& [w, c] : op.words()) {
    // budget after applying generator w[i] = sum of drops of w[0..i-1]
    TrieNode* node = &root;
    int remaining = 0;
    for (const auto& g : w) remaining += max_degree_drop(g);
    root.budget = std::max(root.budget, remaining);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      remaining -= max_degree_drop(*it);
      auto& child = node->children[*it];
      if (!child) {
        child = std::make_unique<TrieNode>();
        child->budget = remaining;
      } else {
        child->budget = std::max(child->budget, remaining);
      }
      node = child.get();
    }
    node->terminal += c.substitute(bind);
  }
  ABCPoly acc;
  walk(root, truncate(ExpScalarPoly::constant(1), root.budget), dim, acc);
  return SymbolPoly(dim, acc);
}

std::optional<ParamRat> is_proportional(const SymbolPoly& p, const SymbolPoly& q) {
  if (q.is_zero()) return p.is_zero() ? std::optional<ParamRat>(ParamRat(1L)) : std::nullopt;
  if (p.is_zero()) return std::nullopt;
  if (p.poly().leading_monomial() != q.poly().leading_monomial()) return std::nullopt;
  ParamRat ratio = p.poly().leading_coeff() / q.poly().leading_coeff();
  if (!(p.poly() == q.poly().scaled(ratio))) return std::nullopt;
  return ratio;
}

}  // namespace confcov
