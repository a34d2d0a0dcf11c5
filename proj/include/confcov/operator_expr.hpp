#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "confcov/exact_ring.hpp"

namespace confcov {

// Invariant generators act on functions of (y, z) in E x E:
//   MulR    multiplication by r = |y-z|^2
//   LapY    Laplacian in y;  LapZ  Laplacian in z
//   MixedR  sum_j d^2/dy_j dz_j
//   EulYZ   sum_j (y_j - z_j) d/dy_j;  EulZY  sum_j (z_j - y_j) d/dz_j
// Coordinate generators carry a 0-based axis and exist only for the
// coordinate oracle.
enum class GenKind : std::uint8_t {
  Identity,
  MulR,
  LapY,
  LapZ,
  MixedR,
  EulYZ,
  EulZY,
  PartialY,
  PartialZ,
  MulY,
  MulZ,
};

struct Generator {
  GenKind kind = GenKind::Identity;
  std::uint8_t axis = 0;

  bool invariant() const { return kind <= GenKind::EulZY; }
  std::string name() const;
  auto operator<=>(const Generator&) const = default;
};

using Word = std::vector<Generator>;

std::string word_to_string(const Word& w);

// Sum of generator words with rational-function coefficients.  In a word the
// rightmost generator acts first.  A diagonal-restricted expression denotes
// the operator followed by restriction to y = z.
class OperatorExpr {
 public:
  using Terms = std::map<Word, ParamRat>;

  OperatorExpr() = default;
  static OperatorExpr identity();
  static OperatorExpr word(Word w, const ParamRat& c = ParamRat(1L));
  static OperatorExpr gen(GenKind k, int axis = 0);

  void add_word(Word w, const ParamRat& c);

  const Terms& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool is_zero() const { return words_.empty(); }
  bool diagonal() const { return diagonal_; }
  bool invariant() const;
  OperatorExpr restricted_to_diagonal() const;

  OperatorExpr& operator+=(const OperatorExpr& o);
  OperatorExpr& operator-=(const OperatorExpr& o);
  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }
  OperatorExpr scaled(const ParamRat& c) const;
  friend OperatorExpr operator*(const ParamRat& c, const OperatorExpr& op) { return op.scaled(c); }
  // Composition: (a * b) applies b first.
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
    return a.diagonal_ == b.diagonal_ && a.words_ == b.words_;
  }

  OperatorExpr substitute(const Bindings& b) const;
  OperatorExpr substitute(const PolyBindings& b) const;

  // One "coefficient * word" per line, in canonical word order.
  std::string to_string() const;

 private:
  Terms words_;
  bool diagonal_ = false;
};

}  // namespace confcov
