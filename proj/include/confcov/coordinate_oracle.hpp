#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "confcov/exact_ring.hpp"
#include "confcov/invariant_calculus.hpp"
#include "confcov/operator_expr.hpp"

namespace confcov {

inline constexpr int kMaxDim = 5;
inline constexpr std::size_t kCoordVars = 2 * kMaxDim;

// Variable layout: y_j at index j, z_j at index kMaxDim + j (0-based j).
inline std::size_t y_var(int j) { return static_cast<std::size_t>(j); }
inline std::size_t z_var(int j) { return static_cast<std::size_t>(kMaxDim + j); }

template <>
struct DefaultNames<ParamPoly, kCoordVars> {
  static std::vector<std::string> get() {
    std::vector<std::string> v;
    for (int j = 0; j < kMaxDim; ++j) v.push_back("y" + std::to_string(j + 1));
    for (int j = 0; j < kMaxDim; ++j) v.push_back("z" + std::to_string(j + 1));
    return v;
  }
};

using CoordPoly = Poly<ParamPoly, kCoordVars>;

struct Axis {
  bool z = false;
  int j = 0;
};

// sum P(y,z) * |y|^(e0 + 2a) |z|^(e1 + 2b) |y-z|^(e2 + 2c), keyed by (a,b,c).
// Default base exponents (e0, e1, e2) are the symbols (beta3, beta2, beta1).
class CoordExpr {
 public:
  using Terms = std::map<Offset, CoordPoly>;

  explicit CoordExpr(int dim);
  CoordExpr(int dim, std::array<ParamPoly, 3> base);

  int dim() const { return dim_; }
  const std::array<ParamPoly, 3>& base() const { return base_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Offset o, const CoordPoly& p);
  CoordExpr& operator+=(const CoordExpr& o);
  CoordExpr& operator-=(const CoordExpr& o);
  friend CoordExpr operator+(CoordExpr a, const CoordExpr& b) { return a += b; }
  friend CoordExpr operator-(CoordExpr a, const CoordExpr& b) { return a -= b; }
  CoordExpr scaled(const ParamPoly& c) const;
  CoordExpr times(const CoordPoly& p) const;
  friend bool operator==(const CoordExpr& a, const CoordExpr& b) {
    return a.dim_ == b.dim_ && a.base_ == b.base_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void check_compatible(const CoordExpr& o) const;

  int dim_;
  std::array<ParamPoly, 3> base_;
  Terms terms_;
};

CoordPoly coord_s(int dim);
CoordPoly coord_t(int dim);
CoordPoly coord_r(int dim);

CoordExpr partial_coord(Axis axis, const CoordExpr& x);

// Nonnegative offsets are expanded into coordinate polynomials; negative
// ones stay radial.  d is always bound to `dim`; `beta` optionally binds
// beta1..beta3 (and any other parameter) in exponents and coefficients.
CoordExpr embed(const InvariantKernel& k, int dim, const Bindings& beta = {});

// Equality of the denoted functions: both sides are brought to the smallest
// common radial offsets and the polynomial difference is tested for zero.
bool equivalent(const CoordExpr& a, const CoordExpr& b);

CoordExpr apply_generator_coord(const Generator& g, const CoordExpr& x);
// Coefficients must be polynomial; d (and `extra`) are substituted.
CoordExpr apply_word_coord(const OperatorExpr& op, const CoordExpr& x, const Bindings& extra = {});

// Normal form sum_alpha a_alpha(y,z) d^alpha with coefficients left.
class CoordOperator {
 public:
  using DerivIndex = Monomial<kCoordVars>;
  using Terms = std::map<DerivIndex, CoordPoly, GrlexGreater<kCoordVars>>;

  explicit CoordOperator(int dim) : dim_(dim) {}
  static CoordOperator identity(int dim);
  static CoordOperator multiplication(int dim, const CoordPoly& p);
  static CoordOperator derivative(int dim, const DerivIndex& alpha);

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const DerivIndex& alpha, const CoordPoly& a);
  CoordOperator& operator+=(const CoordOperator& o);
  CoordOperator& operator-=(const CoordOperator& o);
  friend CoordOperator operator+(CoordOperator a, const CoordOperator& b) { return a += b; }
  friend CoordOperator operator-(CoordOperator a, const CoordOperator& b) { return a -= b; }
  CoordOperator scaled(const ParamPoly& c) const;
  // (a * b) applies b first.
  friend CoordOperator operator*(const CoordOperator& a, const CoordOperator& b);
  friend bool operator==(const CoordOperator& a, const CoordOperator& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  CoordOperator substitute(const Bindings& b) const;
  std::string to_string() const;

 private:
  int dim_;
  Terms terms_;
};

CoordOperator generator_coord(const Generator& g, int dim);
// Coefficients must be polynomial; d (and `extra`) are substituted.
CoordOperator to_coord(const OperatorExpr& op, int dim, const Bindings& extra = {});

CoordOperator formal_adjoint(const CoordOperator& op);
CoordOperator formal_adjoint(const OperatorExpr& op, int dim, const Bindings& extra = {});

// Exact application of a normal-form operator to a polynomial in (y, z).
CoordPoly apply(const CoordOperator& op, const CoordPoly& f);

}  // namespace confcov
