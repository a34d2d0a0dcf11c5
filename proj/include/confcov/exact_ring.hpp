#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "confcov/errors.hpp"
#include "confcov/poly.hpp"

namespace confcov {

using Scalar = mpq_class;

// Fixed parameter set; index order is the term-order precedence.
enum class Param : std::size_t { Beta1 = 0, Beta2, Beta3, Lambda, Mu, Dim };
inline constexpr std::size_t kParamCount = 6;

template <>
struct DefaultNames<Scalar, kParamCount> {
  static std::vector<std::string> get() { return {"b1", "b2", "b3", "lam", "mu", "d"}; }
};

using ParamPoly = Poly<Scalar, kParamCount>;
using Bindings = std::map<Param, Scalar>;
using PolyBindings = std::map<Param, ParamPoly>;

ParamPoly param(Param p);
ParamPoly constant(const Scalar& c);
// rho = d/2
ParamPoly rho();

ParamPoly substitute(const ParamPoly& a, const Bindings& b);
ParamPoly substitute(const ParamPoly& a, const PolyBindings& b);

// a = q*b exactly, or NotDivisible.  b == 0 throws DivisionByZero.
ParamPoly exact_div(const ParamPoly& a, const ParamPoly& b);
std::optional<ParamPoly> try_exact_div(const ParamPoly& a, const ParamPoly& b);

// Monic (leading coefficient 1) greatest common divisor; gcd(0,0) = 0.
ParamPoly gcd(const ParamPoly& a, const ParamPoly& b);

ParamPoly pochhammer(const ParamPoly& a, unsigned m);

// Value with every parameter bound; throws std::invalid_argument otherwise.
Scalar evaluate(const ParamPoly& a, const Bindings& b);
double evaluate_double(const ParamPoly& a, const std::array<double, kParamCount>& values);

std::string to_string(const ParamPoly& p);
Scalar parse_scalar(std::string_view text);
ParamPoly parse_param_poly(std::string_view text);

class ParamRat {
 public:
  ParamRat() : den_(ParamPoly::constant(1)) {}
  ParamRat(const ParamPoly& num);  // NOLINT(google-explicit-constructor)
  ParamRat(const ParamPoly& num, const ParamPoly& den);
  explicit ParamRat(const Scalar& c) : ParamRat(ParamPoly(c)) {}
  explicit ParamRat(long n) : ParamRat(ParamPoly::constant(n)) {}

  const ParamPoly& num() const { return num_; }
  const ParamPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_ == ParamPoly::constant(1); }
  bool is_constant() const { return is_polynomial() && num_.is_constant(); }

  ParamRat& operator+=(const ParamRat& o);
  ParamRat& operator-=(const ParamRat& o);
  ParamRat& operator*=(const ParamRat& o);
  ParamRat& operator/=(const ParamRat& o);
  friend ParamRat operator+(ParamRat a, const ParamRat& b) { return a += b; }
  friend ParamRat operator-(ParamRat a, const ParamRat& b) { return a -= b; }
  friend ParamRat operator*(ParamRat a, const ParamRat& b) { return a *= b; }
  friend ParamRat operator/(ParamRat a, const ParamRat& b) { return a /= b; }
  friend ParamRat operator-(const ParamRat& a);
  friend bool operator==(const ParamRat& a, const ParamRat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  ParamRat substitute(const Bindings& b) const;
  ParamRat substitute(const PolyBindings& b) const;
  double evaluate_double(const std::array<double, kParamCount>& values) const;
  std::string to_string() const;

 private:
  struct Raw {};
  ParamRat(Raw, ParamPoly num, ParamPoly den) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  ParamPoly num_;
  ParamPoly den_;
};

// p/q when q != 0; nullopt when q == 0 and p != 0.  Every nonzero ratio of
// two rational functions is itself one, so callers that need a ratio free of
// some parameters check that on the result.
std::optional<ParamRat> is_proportional(const ParamRat& p, const ParamRat& q);

// True when the rational function does not involve the given parameter.
bool is_free_of(const ParamRat& r, Param p);

template <>
struct CoeffOps<ParamRat> {
  static ParamRat from_int(long n) { return ParamRat(n); }
  static bool is_zero(const ParamRat& c) { return c.is_zero(); }
  static bool is_one(const ParamRat& c) { return c == ParamRat(1L); }
  static bool is_minus_one(const ParamRat& c) { return c == ParamRat(-1L); }
  static bool atomic(const ParamRat& c) { return c.is_polynomial() && c.num().size() <= 1; }
  static std::string to_string(const ParamRat& c) { return c.to_string(); }
};

}  // namespace confcov
