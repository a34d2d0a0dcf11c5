#pragma once

#include <compare>
#include <map>
#include <string>

#include "confcov/exact_ring.hpp"
#include "confcov/operator_expr.hpp"

namespace confcov {

struct Offset {
  int i = 0;  // power of s = |y|^2 beyond beta3/2
  int j = 0;  // power of t = |z|^2 beyond beta2/2
  int k = 0;  // power of r = |y-z|^2 beyond beta1/2
  auto operator<=>(const Offset&) const = default;
};

enum class Invariant { S, T, R };

// sum coeff * s^(beta3/2+i) t^(beta2/2+j) r^(beta1/2+k)
class InvariantKernel {
 public:
  using Terms = std::map<Offset, ParamPoly>;

  InvariantKernel() = default;
  static InvariantKernel monomial(Offset o, const ParamPoly& c = ParamPoly::constant(1));

  void add_term(Offset o, const ParamPoly& c);
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  InvariantKernel& operator+=(const InvariantKernel& o);
  InvariantKernel& operator-=(const InvariantKernel& o);
  friend InvariantKernel operator+(InvariantKernel a, const InvariantKernel& b) { return a += b; }
  friend InvariantKernel operator-(InvariantKernel a, const InvariantKernel& b) { return a -= b; }
  InvariantKernel scaled(const ParamPoly& c) const;
  friend bool operator==(const InvariantKernel& a, const InvariantKernel& b) { return a.terms_ == b.terms_; }

  InvariantKernel substitute(const Bindings& b) const;
  InvariantKernel substitute(const PolyBindings& b) const;

  // "(i,j,k): coeff" per line, offsets ascending; "0" when empty.
  std::string to_string() const;

 private:
  Terms terms_;
};

inline bool is_zero(const InvariantKernel& k) { return k.is_zero(); }

InvariantKernel partial(Invariant v, const InvariantKernel& k);
InvariantKernel mul_invariant(Invariant v, const InvariantKernel& k);

InvariantKernel lap_y(const InvariantKernel& k);
InvariantKernel lap_z(const InvariantKernel& k);
InvariantKernel mixed_R(const InvariantKernel& k);
InvariantKernel euler_yz(const InvariantKernel& k);
InvariantKernel euler_zy(const InvariantKernel& k);

InvariantKernel apply_generator(const Generator& g, const InvariantKernel& k);
// Throws UnsupportedGenerator for coordinate-only generators, and
// std::invalid_argument for non-polynomial coefficients.
InvariantKernel apply_word(const OperatorExpr& op, const InvariantKernel& k);

// Exchange y and z: (s,t) -> (t,s) with beta2 <-> beta3.
InvariantKernel swap_yz(const InvariantKernel& k);

}  // namespace confcov
