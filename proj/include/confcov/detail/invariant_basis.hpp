#pragma once

// Rewrites an O(d)-invariant polynomial in two vector variables u, v as a
// polynomial in |u|^2, <u,v>, |v|^2.  For d >= 2 these three are
// algebraically independent, so the result is unique.  The solve is
// exact, one linear system per bidegree.

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "confcov/errors.hpp"
#include "confcov/exact_ring.hpp"
#include "confcov/poly.hpp"

namespace confcov::detail {

using Exponents3 = std::array<unsigned, 3>;

inline Scalar scale_by(const Scalar& f, const Scalar& x) { return f * x; }
inline ParamRat scale_by(const Scalar& f, const ParamRat& x) { return ParamRat(f) * x; }
inline ParamPoly scale_by(const Scalar& f, const ParamPoly& x) { return x.scaled(f); }

template <std::size_t N>
const Poly<Scalar, N>& invariant_expansion(int dim, std::size_t u0, std::size_t v0, unsigned a, unsigned b,
                                           unsigned c) {
  using P = Poly<Scalar, N>;
  static std::mutex mu;
  static std::map<std::tuple<int, std::size_t, std::size_t, unsigned, unsigned, unsigned>, std::unique_ptr<P>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, u0, v0, a, b, c}];
  if (!slot) {
    P uu, uv, vv;
    for (int j = 0; j < dim; ++j) {
      uu += P::variable(u0 + j, 2);
      uv += P::variable(u0 + j) * P::variable(v0 + j);
      vv += P::variable(v0 + j, 2);
    }
    P r = P::constant(1);
    for (unsigned i = 0; i < a; ++i) r *= uu;
    for (unsigned i = 0; i < b; ++i) r *= uv;
    for (unsigned i = 0; i < c; ++i) r *= vv;
    slot = std::make_unique<P>(std::move(r));
  }
  return *slot;
}

// Returns exponents (a, b, c) of |u|^(2a) <u,v>^b |v|^(2c) -> coefficient.
// Throws NotInvariant when the target is not in the span.
template <class C, std::size_t N>
std::map<Exponents3, C> solve_invariant_basis(const Poly<C, N>& target, int dim, std::size_t u0, std::size_t v0) {
  using Mono = Monomial<N>;
  std::map<std::pair<unsigned, unsigned>, std::vector<std::pair<Mono, C>>> groups;
  for (const auto& [m, c] : target.terms()) {
    unsigned p = 0, q = 0, other = 0;
    for (std::size_t v = 0; v < N; ++v) {
      if (v >= u0 && v < u0 + dim)
        p += m.e[v];
      else if (v >= v0 && v < v0 + dim)
        q += m.e[v];
      else
        other += m.e[v];
    }
    if (other) throw NotInvariant("depends on variables outside the two vectors");
    groups[{p, q}].emplace_back(m, c);
  }
  std::map<Exponents3, C> out;
  for (const auto& [pq, terms] : groups) {
    auto [p, q] = pq;
    std::string where = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    if ((p + q) % 2) throw NotInvariant("odd bidegree " + where);
    std::vector<unsigned> bs;
    for (unsigned b = p % 2; b <= std::min(p, q); b += 2) bs.push_back(b);
    if (bs.empty()) throw NotInvariant("no invariant of bidegree " + where);
    auto expansion = [&](unsigned b) -> const Poly<Scalar, N>& {
      return invariant_expansion<N>(dim, u0, v0, (p - b) / 2, b, (q - b) / 2);
    };

    std::map<Mono, std::size_t, GrlexGreater<N>> row_of;
    auto row = [&](const Mono& m) { return row_of.try_emplace(m, row_of.size()).first->second; };
    for (unsigned b : bs)
      for (const auto& [m, c] : expansion(b).terms()) row(m);
    for (const auto& [m, c] : terms) row(m);

    const std::size_t n = bs.size(), rows = row_of.size();
    std::vector<std::vector<Scalar>> M(rows, std::vector<Scalar>(n));
    std::vector<C> rhs(rows, CoeffOps<C>::from_int(0));
    for (std::size_t col = 0; col < n; ++col)
      for (const auto& [m, c] : expansion(bs[col]).terms()) M[row_of[m]][col] = c;
    for (const auto& [m, c] : terms) rhs[row_of[m]] = c;

    std::size_t prow = 0;
    std::vector<std::size_t> pivot_row(n);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t r = prow;
      while (r < rows && sgn(M[r][col]) == 0) ++r;
      if (r == rows) throw NotInvariant("invariant basis is degenerate in dimension " + std::to_string(dim));
      std::swap(M[r], M[prow]);
      std::swap(rhs[r], rhs[prow]);
      Scalar inv = 1 / M[prow][col];
      for (auto& x : M[prow]) x *= inv;
      rhs[prow] = scale_by(inv, rhs[prow]);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == prow || sgn(M[i][col]) == 0) continue;
        Scalar f = M[i][col];
        for (std::size_t k = 0; k < n; ++k) M[i][k] -= f * M[prow][k];
        if (!CoeffOps<C>::is_zero(rhs[prow])) rhs[i] -= scale_by(f, rhs[prow]);
      }
      pivot_row[col] = prow++;
    }
    for (std::size_t i = prow; i < rows; ++i)
      if (!CoeffOps<C>::is_zero(rhs[i])) throw NotInvariant("inconsistent at bidegree " + where);
    for (std::size_t col = 0; col < n; ++col) {
      const C& x = rhs[pivot_row[col]];
      if (!CoeffOps<C>::is_zero(x)) out.emplace(Exponents3{(p - bs[col]) / 2, bs[col], (q - bs[col]) / 2}, x);
    }
  }
  return out;
}

}  // namespace confcov::detail
