#pragma once

#include <optional>
#include <string>

#include "confcov/coordinate_oracle.hpp"
#include "confcov/exact_ring.hpp"
#include "confcov/operator_expr.hpp"

namespace confcov {

// Variables of an exponential polynomial: y at [0,5), z at [5,10),
// xi at [10,15), eta at [15,20).
inline constexpr std::size_t kExpVars = 4 * kMaxDim;
inline std::size_t xi_var(int j) { return static_cast<std::size_t>(2 * kMaxDim + j); }
inline std::size_t eta_var(int j) { return static_cast<std::size_t>(3 * kMaxDim + j); }

template <class C>
struct DefaultNames<C, kExpVars> {
  static std::vector<std::string> get() {
    std::vector<std::string> v;
    for (const char* p : {"y", "z", "xi", "eta"})
      for (int j = 0; j < kMaxDim; ++j) v.push_back(p + std::to_string(j + 1));
    return v;
  }
};

template <>
struct DefaultNames<ParamRat, 3> {
  static std::vector<std::string> get() { return {"A", "B", "C"}; }
};

using ExpScalarPoly = Poly<Scalar, kExpVars>;
using ExpRatPoly = Poly<ParamRat, kExpVars>;
using ABCPoly = Poly<ParamRat, 3>;

// P(y, z, xi, eta) * exp(<xi,y> + <eta,z>)
struct ExpPolyExpr {
  int dim = 2;
  ExpRatPoly poly;
};

// A = |xi|^2, B = <xi,eta>, C = |eta|^2
class SymbolPoly {
 public:
  SymbolPoly() = default;
  SymbolPoly(int dim, ABCPoly p) : dim_(dim), poly_(std::move(p)) {}
  static SymbolPoly monomial(int dim, unsigned a, unsigned b, unsigned c, const ParamRat& coeff);

  int dim() const { return dim_; }
  const ABCPoly& poly() const { return poly_; }
  bool is_zero() const { return poly_.is_zero(); }
  ParamRat coefficient(unsigned a, unsigned b, unsigned c) const;

  friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) { return {a.dim_, a.poly_ * b.poly_}; }
  friend SymbolPoly operator+(const SymbolPoly& a, const SymbolPoly& b) { return {a.dim_, a.poly_ + b.poly_}; }
  friend bool operator==(const SymbolPoly& a, const SymbolPoly& b) { return a.poly_ == b.poly_; }
  SymbolPoly scaled(const ParamRat& c) const { return {dim_, poly_.scaled(c)}; }
  std::string to_string() const { return poly_.to_string(); }

 private:
  int dim_ = 2;
  ABCPoly poly_;
};

// Full application of the word sum to exp(<xi,y> + <eta,z>); d is bound to dim.
ExpPolyExpr exp_apply(const OperatorExpr& op, int dim);

// Sets y = z = 0 and rewrites in A, B, C; throws NotInvariant.
SymbolPoly restrict_symbol(const ExpPolyExpr& e);

// exp_apply followed by restrict_symbol, dropping terms that cannot survive
// the restriction.  Same result, much cheaper for long words.
SymbolPoly symbol(const OperatorExpr& op, int dim);

// Ratio p/q when p = ratio * q with a single rational function; nullopt otherwise.
std::optional<ParamRat> is_proportional(const SymbolPoly& p, const SymbolPoly& q);

}  // namespace confcov
